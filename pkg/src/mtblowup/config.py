"""Solver tolerances and the ``key=value`` config file that can preset them."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

__all__ = ["Tolerances", "load_config"]


@dataclass(frozen=True)
class Tolerances:
    ode_tol: float = 1e-12
    shoot_tol_R: float = 1e-10
    quad_tol: float = 1e-11

    def __post_init__(self):
        if not 1e-14 <= self.ode_tol <= 1e-6:
            raise ValueError("ode_tol must lie in [1e-14, 1e-6]")
        if not self.shoot_tol_R > 0 or not self.quad_tol > 0:
            raise ValueError("tolerances must be positive")

    def as_dict(self) -> dict:
        return asdict(self)


def load_config(path: str | Path | None, base: Tolerances | None = None) -> Tolerances:
    """Read ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    tol = base or Tolerances()
    if path is None:
        return tol
    known = {f.name for f in fields(Tolerances)}
    updates = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        updates[key] = float(value)
    return replace(tol, **updates)
