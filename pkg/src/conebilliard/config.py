"""Default numerical tolerances, in one place.

Every module reads its defaults from here so acceptance runs and the CLI
agree on the same numbers.
"""
from dataclasses import dataclass

ROOT_TOL = 1e-12          # relative tolerance in the line parameter t
TANGENT_TOL = 1e-9        # |<v, n>| at a hit below this means tangent
GAMMA_TOL = 1e-9          # |G(v)| below this with v^n > 0 means v on Gamma
ORIGIN_TOL = 1e-12        # |Q| below this means the line meets the vertex
MAX_ITER = 200            # bisection / golden-section iteration cap
BRACKET_LIMIT = 2.0 ** 40 # largest |t| searched by the generic solver
CONVEXITY_GRID = 4096     # angles sampled for the radial curvature check
CONVEXITY_TOL = 1e-12     # curvature numerators within this of 0 are degenerate
REFLECTION_CAP = 100_000
SAMPLE_RADIUS = 3.0       # radius of the ball Q is drawn from


@dataclass(frozen=True)
class Tolerances:
    root: float = ROOT_TOL
    tangent: float = TANGENT_TOL
    gamma: float = GAMMA_TOL
    origin: float = ORIGIN_TOL
    max_iter: int = MAX_ITER
    bracket_limit: float = BRACKET_LIMIT

    @classmethod
    def from_dict(cls, data):
        data = dict(data or {})
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self):
        return {"root": self.root, "tangent": self.tangent}
