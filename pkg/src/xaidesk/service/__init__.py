from .app import create_app
from .config import AppConfig, AppState, build_state

__all__ = ["AppConfig", "AppState", "build_state", "create_app"]
