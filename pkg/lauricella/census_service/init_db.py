from lauricella.census_service.database import Base, engine
from lauricella.census_service import models  # noqa: F401  registers the tables


def init_db():
    """Initialize the database and create tables"""
    try:
        Base.metadata.create_all(bind=engine)
        print("✅ Census Service database tables created successfully!")
        return True
    except Exception as e:
        print(f"❌ Error creating Census Service database tables: {str(e)}")
        return False


if __name__ == "__main__":
    init_db()
