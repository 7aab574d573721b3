"""Data models and exceptions for rainbow Mantel experiments."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from rainbow_mantel.graph_core import GraphTriple

# === EXCEPTIONS ===


class RainbowMantelError(Exception):
    """Base exception for rainbow Mantel errors."""

    pass


class ValidationError(RainbowMantelError):
    """Raised when an operation receives invalid input."""

    pass


class LoopError(ValidationError):
    """Raised when an edge would join a vertex to itself."""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"Loops are not allowed: ({vertex}, {vertex})")


class VertexRangeError(ValidationError):
    """Raised when a vertex index falls outside 0..n-1."""

    def __init__(self, vertex: int, n: int):
        self.vertex = vertex
        self.n = n
        super().__init__(f"Vertex {vertex} out of range for n={n}")


class GraphFormatError(RainbowMantelError):
    """Raised when a graph-triple file cannot be parsed."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class SearchLimitError(ValidationError):
    """Raised when an exhaustive search is requested beyond its size limit."""

    pass


class CertificationError(RainbowMantelError):
    """Raised when a numeric claim that must hold does not."""

    pass


# === ENUMS ===


class OutputFormat(Enum):
    """Output format options for the CLI."""

    JSON = "json"
    CSV = "csv"


class SearchMode(Enum):
    """Strategies for computing R(n)."""

    EXHAUSTIVE = "exhaustive"
    BNB = "bnb"
    LOCAL = "local"


class InitStrategy(Enum):
    """Starting triple for local search."""

    BIPARTITE = "bipartite"
    CONSTRUCTION = "construction"


class DigonCase(Enum):
    """Outcome labels of the digon scene enumeration."""

    CASE_1A = "1a"
    CASE_1B = "1b"
    CASE_1C = "1c"
    CASE_2A = "2a"
    CASE_2B = "2b"
    VIOLATION = "violation"


class Slack(Enum):
    """The three inequalities of the density endgame."""

    G1 = "g1"
    G2 = "g2"
    G3 = "g3"


# === DATA MODELS ===


@dataclass(frozen=True)
class RainbowWitness:
    """Vertices with v1v2 in G1, v2v3 in G2 and v3v1 in G3."""

    v1: int
    v2: int
    v3: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.v1, self.v2, self.v3)


@dataclass(frozen=True)
class Digon:
    """A vertex pair that is an edge in exactly two colours."""

    x: int
    y: int
    colors: tuple[int, int]


@dataclass(frozen=True)
class ConstructionParams:
    """Sizes of the {A, B, C} construction: |B| = |C| = block, |A| = n - 2*block."""

    n: int
    block: int

    @property
    def size_a(self) -> int:
        return self.n - 2 * self.block


@dataclass
class SearchOutcome:
    """Result of one R(n) computation."""

    n: int
    value: int
    exact: bool
    witness: GraphTriple
    nodes_visited: int
    wall_time: float
    mode: SearchMode


@dataclass(frozen=True)
class DigonSceneOutcome:
    """Classification of one cross configuration between two digons."""

    case: DigonCase
    cross_counts: tuple[int, int, int]


@dataclass
class DigonReport:
    """Aggregated digon enumeration for one colour assignment."""

    scene: int
    colors: tuple[int, int, int]
    configurations: int
    filtered: int
    case_counts: dict[str, int] = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return self.case_counts.get(DigonCase.VIOLATION.value, 0)

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass
class LemmaResult:
    """Pass/fail record for one batch of lemma checks."""

    name: str
    checked: int
    failures: int
    not_applicable: int = 0
    seconds: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass(frozen=True)
class SimplexPoint:
    """Densities (a, b, c, d) of the digon classes and the leftover set."""

    a: float
    b: float
    c: float
    d: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class Box:
    """Closed intervals for (a, b, c, d); d is implied by a + b + c + d = 1."""

    lower: tuple[float, float, float, float]
    upper: tuple[float, float, float, float]

    def contains(self, point: SimplexPoint) -> bool:
        return all(
            lo <= x <= hi
            for lo, x, hi in zip(self.lower, point.as_tuple(), self.upper)
        )


@dataclass
class ChainStep:
    """One implication of the derived inequality chain, checked on samples."""

    name: str
    checked: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass
class Certificate:
    """Box-decomposition certificate that the slack inequalities have no common solution."""

    resolution: int
    max_depth: int
    boxes_total: int
    boxes_excluded_by: dict[str, int]
    undecided: list[Box]
    tangent_boxes: int
    tangent_point: tuple[float, float, float, float]
    tangent_radius: float
    tangent_slacks: tuple[float, float, float]
    tangent_samples: int
    tangent_violations: int
    worst_margin: float
    identities: dict[str, float]
    tolerance: float
    seconds: float = 0.0

    @property
    def complete(self) -> bool:
        return not self.undecided and self.tangent_violations == 0


@dataclass
class RunConfig:
    """Resolved settings of one CLI invocation."""

    subcommand: str
    seed: int
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON
    threads: int = 1


@dataclass
class BenchRow:
    """One line of the benchmark CSV."""

    kind: str
    n: int
    work: int
    seconds: float

    @property
    def rate(self) -> float:
        return self.work / self.seconds if self.seconds > 0 else 0.0


@dataclass(frozen=True)
class DensityReport:
    """Edge counts of one construction and how they compare with n**2 / 4."""

    n: int
    block: int
    edges: tuple[int, int, int]
    rainbow_count: int

    @property
    def min_edges(self) -> int:
        return min(self.edges)

    @property
    def min_density(self) -> float:
        """min |E_i| / n**2, to be compared with (1 + tau**2) / 4."""
        return self.min_edges / (self.n * self.n) if self.n else 0.0

    @property
    def beats_quarter(self) -> bool:
        return 4 * self.min_edges > self.n * self.n
