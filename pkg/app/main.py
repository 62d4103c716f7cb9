from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.routers import cases, coned, groups, quasi
from ggt import __version__
from ggt.config import configure_logging

configure_logging()

app = FastAPI(title="ggt", version=__version__)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["http://localhost:3000", "http://127.0.0.1:3000"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(groups.router)
app.include_router(coned.router)
app.include_router(quasi.router)
app.include_router(cases.router)


@app.get("/")
def root():
    return {"message": "ggt API is running", "version": __version__}
