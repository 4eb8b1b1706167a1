import io

import pytest

import cli
import fingroup


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    return code, out.getvalue()


def test_coeffs_csv():
    code, text = run('coeffs', '--n-max', '11', '--format', 'csv')
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == 'i,1,2,3,4,5,6,7,8,9,10,11'
    assert lines[1] == '1,-1,0,0,0,0,0,0,0,0,0,0'
    assert lines[5] == '5,0,0,-5,20,-16,0,0,0,0,0,0'
    assert len(lines) == 12


def test_coeffs_table_blanks_zeros():
    code, text = run('coeffs', '--n-max', '11', '--format', 'table')
    assert code == 0
    rows = {line.split()[0]: line.split()[1:] for line in text.splitlines()[2:]}
    assert rows['4'] == ['-1', '8', '-8']
    assert rows['7'] == ['7', '-56', '112', '-64']
    assert rows['11'][-1] == '-1024'
    assert '-1120' in rows['10']


def test_coeffs_checks():
    code, text = run('coeffs', '--n-max', '40', '--check')
    assert code == 0
    assert text.splitlines() == [
        'row identities: pass (rows 1..40)',
        'closed form: pass (1600 entries)',
        'simplified recurrence: pass',
        'summation identity: pass (780 pairs)',
    ]


def test_group_info():
    code, text = run('group', '--builtin', 'q8', '--info')
    assert code == 0
    assert text.splitlines() == [
        'group q8',
        'order 8',
        'elements 1 -1 i -i j -j k -k',
        'element orders 1 2 4 4 4 4 4 4',
        'exponent 4',
        'class <= 2: yes',
        'center {1, -1}',
        'derived subgroup {1, -1}',
    ]


def test_group_info_class_three():
    code, text = run('group', '--group', 'd8_16')
    assert code == 0
    assert 'class <= 2: no (witness' in text


def test_group_file_matches_builtin(d4_file):
    code, text = run('group', '--file', d4_file, '--dump')
    assert code == 0
    assert text == fingroup.dump_group_file(fingroup.builtin('d4'))


def test_truncated_group_file(tmp_path, capsys):
    path = tmp_path / 'bad.grp'
    path.write_text("order 2\nelements e t\ne t\n")
    code, _ = run('group', '--file', str(path))
    assert code == 2
    assert 'line 4' in capsys.readouterr().err


def test_missing_group_file(tmp_path, capsys):
    code, _ = run('group', '--file', str(tmp_path / 'missing.grp'))
    assert code == 2
    assert capsys.readouterr().err.startswith('error: ')


def test_unknown_group(capsys):
    code, _ = run('group', '--group', 'foo')
    assert code == 2
    assert 'unknown builtin group' in capsys.readouterr().err


def test_usage_errors():
    assert run()[0] == 2
    assert run('verify')[0] == 2
    assert run('verify', '--group', 'q8', '--file', 'x.grp')[0] == 2
    assert run('verify', '--group', 'q8', '--method', 'guess')[0] == 2


def test_machine_dump():
    code, text = run('machine', '--group', 'z2')
    assert code == 0
    assert text.splitlines() == ['e | e -> e / e', 'e | t -> t / t', 't | e -> t / t', 't | t -> e / e']


def test_machine_of_word():
    code, text = run('machine', '--group', 'q8', 'x C(i)')
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == '# 2 states, initial 0'
    assert lines[1] == '0 | 1 -> i / 1'
    assert len(lines) == 1 + 2 * 8


def test_act():
    code, text = run('act', '--group', 'q8', 'x', 'i j k')
    assert code == 0
    assert text == 'i -k -i\n'


def test_nf():
    code, text = run('nf', '--group', 'q8', 'x i x^-1 j', '', 'x^3', 'i', '--order', '10')
    assert code == 0
    assert text.splitlines() == [
        '[0:j][1:-i] x^0\torder 4',
        '1\torder 1',
        'x^3\torder >10',
        '[0:i] x^0\torder 4',
    ]


def test_eq():
    assert run('eq', '--group', 'q8', 'x i x^-1 j', 'j x (-i) x^-1') == (0, 'equal\n')
    assert run('eq', '--group', 'q8', '--method', 'action', 'x i x^-1 j', 'j x (-i) x^-1') == (0, 'equal\n')
    code, text = run('eq', '--group', 'q8', 'x i x^-1 j', 'j x i x^-1')
    assert code == 1
    assert text.startswith('not equal\n')


def test_eq_syntax_error(capsys):
    code, text = run('eq', '--group', 'q8', 'x i x^-1 j', 'j x i x^-')
    assert code == 2
    assert text == ''
    assert 'syntax error at position 7' in capsys.readouterr().err


def test_verify_relations():
    code, text = run('verify', '--group', 'q8', '--n-max', '2')
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == 'CHECK relation n=1 g=1 h=1 PASS'
    assert lines[-1] == '128 checks, 128 pass'
    assert len(lines) == 129


def test_verify_single_level():
    code, text = run('verify', '--group', 'z4', '--n', '3', '--method', 'action')
    assert code == 0
    assert text.splitlines()[-1] == '16 checks, 16 pass'
    assert all(' n=3 ' in line for line in text.splitlines()[:-1])


def test_verify_class_three_fails():
    code, text = run('verify', '--group', 'd8_16', '--n', '1')
    assert code == 1
    assert 'CHECK relation n=1 g=r h=s FAIL' in text.splitlines()
    assert '  witness: ' in text
    assert text.splitlines()[-1].endswith(' fail')


def test_verify_csv():
    code, text = run('verify', '--group', 'z2', '--n-max', '1', '--format', 'csv')
    assert code == 0
    assert text.splitlines() == [
        'check,n,g,h,verdict,witness',
        'relation,1,e,e,PASS,',
        'relation,1,e,t,PASS,',
        'relation,1,t,e,PASS,',
        'relation,1,t,t,PASS,',
    ]


@pytest.mark.parametrize('check, total', [
    ('embedding', 3 * 4), ('infinite-order', 1), ('wreath', 2 * 4), ('depth', 2 * 4),
])
def test_verify_other_checks(check, total):
    code, text = run('verify', '--group', 'z4', '--check', check, '--n-max', '1')
    assert code == 0
    assert text.splitlines()[-1] == f'{total} checks, {total} pass'


def test_verify_all_checks():
    code, text = run('verify', '--group', 'z2', '--check', 'all', '--n-max', '1')
    assert code == 0
    # relations 4, wreath 4, depth 4, embedding 6, infinite order 1
    assert text.splitlines()[-1] == '19 checks, 19 pass'


def test_verify_bad_level(capsys):
    code, _ = run('verify', '--group', 'q8', '--n', '0')
    assert code == 2
    assert 'out of range' in capsys.readouterr().err


def test_timing_only_on_request():
    _, text = run('verify', '--group', 'z2', '--n-max', '1')
    assert 'wall time' not in text
    _, text = run('verify', '--group', 'z2', '--n-max', '1', '--timing')
    assert text.splitlines()[-1].startswith('wall time ')


def test_output_is_reproducible():
    assert run('xval', '--group', 'd4', '--count', '15', '--seed', '5') == \
        run('xval', '--group', 'd4', '--count', '15', '--seed', '5')


def test_xval():
    code, text = run('xval', '--group', 'q8', '--count', '20', '--max-len', '8', '--seed', '42')
    assert code == 0
    assert text.splitlines() == ['xval: 20/20 pass', 'nf-roundtrip: 20/20 pass', '40 checks, 40 pass']


def test_archive_and_reports(tmp_path):
    url = f"sqlite:///{tmp_path / 'reports.db'}"
    code, _ = run('verify', '--group', 'z2', '--n-max', '1', '--archive', url)
    assert code == 0
    code, text = run('reports', '--archive', url)
    assert code == 0
    assert text.startswith('1\tz2\trelations\t4 checks, 4 pass\t')


def test_eq_over_the_trivial_group(tmp_path):
    path = tmp_path / 'one.grp'
    path.write_text("order 1\nelements e\ne\n")
    assert run('eq', '--file', str(path), 'x', '') == (0, 'equal\n')
    assert run('eq', '--file', str(path), '--method', 'action', 'x^2', 'C(e)') == (0, 'equal\n')


@pytest.mark.parametrize('value', ['0', '-3', 'many'])
def test_state_budget_must_be_positive(value, capsys):
    code, text = run('eq', '--group', 'q8', '--state-budget', value, 'x', 'x')
    assert code == 2
    assert text == ''
    assert '--state-budget' in capsys.readouterr().err


def test_small_state_budget_is_enforced(capsys):
    code, _ = run('eq', '--group', 'q8', '--state-budget', '1', 'x i x^-1 j', 'j x (-i) x^-1')
    assert code == 2
    assert 'error: ' in capsys.readouterr().err


def test_group_file_label_error_names_line(tmp_path, capsys):
    path = tmp_path / 'bad.grp'
    path.write_text("order 2\nelements e t^\ne t^\nt^ e\n")
    code, _ = run('group', '--file', str(path))
    assert code == 2
    assert 'error: line 2: ' in capsys.readouterr().err
