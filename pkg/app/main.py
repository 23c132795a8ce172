from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from contextlib import asynccontextmanager
import logging
from .config import settings
from .dependencies import FixtureRegistry, set_fixture_registry
from .routers import artin, graphs, ktheory, reversing, words

# Configure logging
logging.basicConfig(level=getattr(logging, settings.log_level))
logger = logging.getLogger(__name__)

@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    logger.info("Loading built-in fixtures...")
    registry = FixtureRegistry()
    registry.warm()
    set_fixture_registry(registry)

    logger.info("Workbench API startup complete")
    yield

    # Shutdown
    logger.info("Shutting down...")

app = FastAPI(
    title="Monoid Workbench API",
    description="Reversing, Garside normal forms, graph models and K-theory of boundary crossed products",
    version="1.0.0",
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(words.router, prefix="/api", tags=["words"])
app.include_router(reversing.router, prefix="/api", tags=["reversing"])
app.include_router(artin.router, prefix="/api", tags=["artin"])
app.include_router(graphs.router, prefix="/api", tags=["graphs"])
app.include_router(ktheory.router, prefix="/api", tags=["ktheory"])

@app.get("/")
async def root():
    return {"message": "Monoid Workbench API is running", "version": "1.0.0",
            "schema_version": settings.schema_version}

@app.get("/health")
async def health_check():
    from .dependencies import get_fixture_registry
    return {"status": "healthy", "fixtures": get_fixture_registry().cached}
