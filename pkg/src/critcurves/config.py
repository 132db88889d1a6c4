"""Numerical tolerances and a small key=value configuration file format."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    eps_b: float = 1e-9    # boundary band on a normalised ray's |x|
    eps_c: float = 1e-11   # curve membership, relative to max(1, |grad C|)
    eps_q: float = 1e-7    # zero test for Q_t, relative to max(1, max_t |Q_t|)
    eps_g: float = 1e-9    # relative distance of a point to the polygonal median

    def updated(self, **changes) -> "Tolerances":
        return replace(self, **{k: float(v) for k, v in changes.items() if v is not None})


DEFAULT = Tolerances()


def load_config(path) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment. Values stay strings."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def tolerances_from(mapping: dict, base: Tolerances = DEFAULT) -> Tolerances:
    names = {f.name for f in fields(Tolerances)}
    return base.updated(**{k: mapping[k] for k in names if k in mapping})
