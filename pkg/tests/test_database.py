import pytest
from sqlalchemy import inspect

import database
import relcheck
from models import CheckRecord, VerificationRun


@pytest.fixture
def url(tmp_path):
    return f"sqlite:///{tmp_path / 'archive.db'}"


def test_archive_round_trip(url, d16):
    report = relcheck.verify_all(d16, 1)
    run_id = database.archive_report(report, url=url)
    runs = database.list_runs(url)
    assert [r.id for r in runs] == [run_id]
    run = runs[0]
    assert run.group_name == 'd8_16'
    assert run.kind == 'relations'
    assert run.method == 'machine'
    assert run.n_max == 1
    assert run.total_checks == 256
    assert run.passed + run.failed + run.errors == run.total_checks
    assert run.failed == report.failed > 0


def test_failed_checks_keep_report_order(url, d16):
    report = relcheck.verify_all(d16, 1)
    run_id = database.archive_report(report, url=url)
    records = database.failed_checks(run_id, url=url)
    expected = [(c.check_id, c.n, c.g, c.h) for c in report.failures()]
    assert [(r.check_id, r.n, r.g, r.h) for r in records] == expected
    assert all(r.witness for r in records)


def test_runs_are_listed_in_order(url, z2):
    first = database.archive_report(relcheck.verify_all(z2, 1), url=url)
    second = database.archive_report(relcheck.cross_validate(z2, count=5, seed=1), url=url, seed=1)
    runs = database.list_runs(url)
    assert [r.id for r in runs] == [first, second]
    assert runs[1].kind == 'xval'
    assert runs[1].seed == 1
    assert runs[1].n_max is None


def test_session_dependency(url):
    gen = database.get_db(url)
    db = next(gen)
    assert db.query(VerificationRun).count() == 0
    assert db.query(CheckRecord).count() == 0
    gen.close()


def test_default_url_comes_from_config():
    # the testing configuration points at an in-memory database
    engine, _ = database.get_engine_and_session_local()
    assert str(engine.url) == 'sqlite:///:memory:'


def test_tables_exist_once_the_engine_is_built(url, z2):
    engine, _ = database.get_engine_and_session_local(url)
    assert {'verification_runs', 'check_records'} <= set(inspect(engine).get_table_names())
    run_id = database.archive_report(relcheck.verify_all(z2, 1), url=url)
    database.create_tables(engine)
    assert [r.id for r in database.list_runs(url)] == [run_id]
