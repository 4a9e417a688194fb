"""Command-line front end and the JSON workspace format."""

from .workspace import Elements, Workspace, WorkspaceError, dumps, load, loads, save, to_json
from .main import RunResult, UsageError, main, run_check, run_construct
