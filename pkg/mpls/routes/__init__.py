# FastAPI route handlers
