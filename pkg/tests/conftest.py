import os
import random
from fractions import Fraction

import pytest

# in-memory census store for every test session
os.environ["LAURICELLA_DATABASE_URL"] = "sqlite://"

from lauricella.weights import WeightSystem  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def cocompact_example():
    """(3,3,3,7)/12"""
    return WeightSystem(weights=(Fraction(3, 12), Fraction(3, 12), Fraction(3, 12), Fraction(7, 12)))


@pytest.fixture
def parabolic_quarters():
    return WeightSystem(weights=(Fraction(1, 4),) * 4)


@pytest.fixture
def db_session():
    from lauricella.census_service import models
    from lauricella.census_service.database import SessionLocal, engine

    models.Base.metadata.create_all(bind=engine)
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()
