import logging
from contextlib import closing
from functools import lru_cache

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

from config import get_config
from models import Base, CheckRecord, VerificationRun

logger = logging.getLogger(__name__)


@lru_cache(maxsize=8)
def get_engine_and_session_local(url=None):
    """
    Creates and caches the SQLAlchemy engine and sessionmaker for one URL.
    Tables are created on first use, so a fresh database is ready immediately.
    """
    url = url or get_config().DATABASE_URL
    logger.info("creating SQLAlchemy engine for %s", url)
    if url.startswith("sqlite"):
        # an in-memory database lives only as long as its single connection
        extra = {'poolclass': StaticPool} if ':memory:' in url else {}
        engine = create_engine(url, connect_args={"check_same_thread": False}, **extra)
    else:
        # PostgreSQL URLs go through psycopg2-binary
        engine = create_engine(url)
    create_tables(engine)
    SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    return engine, SessionLocal


def create_tables(engine):
    """Creates all tables defined in models.py; existing tables are left alone."""
    Base.metadata.create_all(bind=engine)


def get_db(url=None):
    """Yields a database session and closes it afterwards."""
    _, SessionLocal = get_engine_and_session_local(url)
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


def _n_max(report):
    levels = [c.n for c in report.checks if c.n is not None and c.check_id != 'xval' and c.check_id != 'nf-roundtrip']
    return max(levels) if levels else None


def archive_report(report, url=None, seed=None) -> int:
    """Stores a VerificationReport with all its checks; returns the run id."""
    with closing(get_db(url)) as sessions:
        db = next(sessions)
        run = VerificationRun(group_name=report.group, kind=report.kind, method=report.method,
                              n_max=_n_max(report), seed=seed, total_checks=report.total,
                              passed=report.passed, failed=report.failed, errors=report.errors,
                              wall_time=report.wall_time)
        for position, c in enumerate(report.checks):
            run.checks.append(CheckRecord(position=position, check_id=c.check_id, n=c.n, g=c.g, h=c.h,
                                          verdict=c.verdict, witness=c.witness))
        try:
            db.add(run)
            db.commit()
        except Exception:
            db.rollback()
            raise
        db.refresh(run)
        logger.info("archived %s report for %s as run %d", report.kind, report.group, run.id)
        return run.id


def list_runs(url=None):
    with closing(get_db(url)) as sessions:
        db = next(sessions)
        runs = db.query(VerificationRun).order_by(VerificationRun.id).all()
        db.expunge_all()
        return runs


def failed_checks(run_id, url=None):
    """CheckRecords of one run whose verdict is FAIL or ERROR, in report order."""
    with closing(get_db(url)) as sessions:
        db = next(sessions)
        records = (db.query(CheckRecord)
                   .filter(CheckRecord.run_id == run_id, CheckRecord.verdict.in_(('FAIL', 'ERROR')))
                   .order_by(CheckRecord.position).all())
        db.expunge_all()
        return records
