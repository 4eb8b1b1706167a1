import datetime

from sqlalchemy import Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import declarative_base, relationship


Base = declarative_base()


class VerificationRun(Base):
    __tablename__ = 'verification_runs'
    id = Column(Integer, primary_key=True, index=True)
    group_name = Column(String, nullable=False, index=True)
    kind = Column(String, nullable=False)  # relations, wreath, depth, embedding, infinite-order, xval, all
    method = Column(String, nullable=True)
    n_max = Column(Integer, nullable=True)
    seed = Column(Integer, nullable=True)
    total_checks = Column(Integer, default=0, nullable=False)
    passed = Column(Integer, default=0, nullable=False)
    failed = Column(Integer, default=0, nullable=False)
    errors = Column(Integer, default=0, nullable=False)
    wall_time = Column(Float, default=0.0)
    created_at = Column(DateTime, default=datetime.datetime.now)

    checks = relationship("CheckRecord", back_populates="run", cascade="all, delete-orphan",
                          order_by="CheckRecord.position")

    def __repr__(self):
        return (f"<VerificationRun(id={self.id}, group='{self.group_name}', kind='{self.kind}', "
                f"passed={self.passed}/{self.total_checks})>")


class CheckRecord(Base):
    __tablename__ = 'check_records'
    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey('verification_runs.id'), nullable=False)
    position = Column(Integer, nullable=False)  # order within the report
    check_id = Column(String, nullable=False)
    n = Column(Integer, nullable=True)
    g = Column(String, nullable=False)
    h = Column(String, nullable=False)
    verdict = Column(String, nullable=False)
    witness = Column(Text, nullable=True)

    run = relationship("VerificationRun", back_populates="checks")

    def __repr__(self):
        return f"<CheckRecord(run={self.run_id}, check='{self.check_id}', n={self.n}, verdict='{self.verdict}')>"
