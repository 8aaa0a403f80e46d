from datetime import datetime, timezone

from sqlalchemy import Boolean, Column, DateTime, ForeignKey, Integer, String
from sqlalchemy.orm import relationship

from lauricella.census_service.database import Base


def _utcnow():
    return datetime.now(timezone.utc)


class CensusRun(Base):
    __tablename__ = "census_runs"

    id = Column(Integer, primary_key=True, index=True)
    n = Column(Integer, nullable=False)
    max_denominator = Column(Integer, nullable=False)
    filters = Column(String, nullable=False, default="")
    entry_count = Column(Integer, nullable=False, default=0)
    created_at = Column(DateTime, default=_utcnow)

    rows = relationship("CensusRow", back_populates="run", order_by="CensusRow.position", cascade="all, delete-orphan")


class CensusRow(Base):
    __tablename__ = "census_rows"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("census_runs.id"), nullable=False, index=True)
    position = Column(Integer, nullable=False)
    weights = Column(String, nullable=False)
    case = Column(String, nullable=False)
    int_ok = Column(Boolean, nullable=False)
    half_int_ok = Column(Boolean, nullable=False)
    cusps = Column(Integer, nullable=True)
    arithmetic = Column(Boolean, nullable=True)
    witnesses = Column(String, nullable=False, default="")

    run = relationship("CensusRun", back_populates="rows")
