"""HTTP service over a project: annotation sessions and pipeline control."""

from jalign.service.app import create_app
from jalign.service.sessions import Session, SessionStore, session_id_for

__all__ = ["Session", "SessionStore", "create_app", "session_id_for"]
