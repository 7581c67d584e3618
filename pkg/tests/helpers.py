import io

from tabled.interp import EvalConfig
from tabled.pipeline import check_source, run_checked


def run_source(source, env=None, seed=42, ensure=True):
    """Check then run a program; returns (checked, ran)."""
    checked = check_source(source, "<test>", env)
    ran = None
    if checked.program is not None:
        ran = run_checked(checked, env, EvalConfig(ensure, seed, io.StringIO()))
    return checked, ran
