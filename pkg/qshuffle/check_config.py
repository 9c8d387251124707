import json
import os
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Union

from .constructors import Spin

CHECK_NAMES = (
    "fm", "fm_alt", "ybe", "mixed", "ef", "unitarity", "limit", "delta",
    "k_consistency", "band", "gauge", "ddr", "r_closed", "r_fusion",
    "rhat_fusion", "words", "mutation",
)
BACKENDS = ("exact", "numeric")
DEFAULT_MAX_DEGREE = 8


def max_degree() -> int:
    """Degree guard; QSHUFFLE_MAX_DEGREE overrides the default of 8."""
    raw = os.environ.get("QSHUFFLE_MAX_DEGREE", DEFAULT_MAX_DEGREE)
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"QSHUFFLE_MAX_DEGREE must be an integer, but got {raw}") from None


@dataclass
class CheckSpec:
    name: str = "fm"
    j1: str = "1/2"
    j2: str = "1/2"
    j3: str = "1/2"
    degree: int = 4
    max_m: int = 2
    max_n: int = 5
    count: int = 10
    seed: int = 0
    backend: str = "exact"
    q_values: List[float] = field(default_factory=lambda: [1.3, 1.7])
    tol: float = 1e-8

    """
    :param name: check to run, one of CHECK_NAMES
    :param j1: first spin as "n/2" or an integer string; j2, j3 likewise
    :param degree: truncation bound D on the total (t, s)-degree
    :param max_m: largest m for the Delta identity families
    :param max_n: largest Catalan half-length for the word checks
    :param count: number of sign flips tried by the mutation check
    :param seed: random seed for choosing the flipped terms
    :param backend: exact or numeric
    :param q_values: sample values of q for the numeric backend
    :param tol: normalized residual bound for the numeric backend
    """

    def __post_init__(self):
        self.validation()

    def save(self, config_file: str):
        values = asdict(self)
        with open(config_file, 'w') as f:
            json.dump(values, f, indent=4)

    def __repr__(self):
        values = asdict(self)
        return f"CheckSpec({values})"

    def __str__(self):
        values = asdict(self)
        return json.dumps(values, indent=4)

    @property
    def spins(self) -> Dict[str, Spin]:
        return {"j1": Spin.parse(self.j1), "j2": Spin.parse(self.j2), "j3": Spin.parse(self.j3)}

    def validation(self):
        if self.name not in CHECK_NAMES:
            raise ValueError(f'name must be one of {CHECK_NAMES}, but got {self.name}')
        for key in ("j1", "j2", "j3"):
            value = getattr(self, key)
            try:
                Spin.parse(value)
            except ValueError:
                raise ValueError(f'{key} must be a positive half-integer such as "1/2" or "3/2", '
                                 f'but got {value!r}') from None
            setattr(self, key, str(Spin.parse(value)))
        bound = max_degree()
        if not isinstance(self.degree, int) or not (0 <= self.degree <= bound):
            raise ValueError(f'degree must be an integer in [0, {bound}], but got {self.degree}')
        if self.max_m < 0:
            raise ValueError(f'max_m must be >= 0, but got {self.max_m}')
        if self.max_n < 0:
            raise ValueError(f'max_n must be >= 0, but got {self.max_n}')
        if self.count < 1:
            raise ValueError(f'count must be >= 1, but got {self.count}')
        if self.backend not in BACKENDS:
            raise ValueError(f'backend must be one of {BACKENDS}, but got {self.backend}')
        if self.backend == "numeric":
            if not self.q_values:
                raise ValueError('numeric backend needs at least one value in q_values')
            if any(q <= 1 for q in self.q_values):
                raise ValueError(f'q_values must all be > 1, but got {self.q_values}')
        if not self.tol > 0:
            raise ValueError(f'tol must be positive, but got {self.tol}')

    @classmethod
    def load(cls, config: Union[str, Dict[str, Any], "CheckSpec", None] = None, **kwargs: Any):
        if config is None:
            config_dict = {}
        elif isinstance(config, str):
            with open(config, 'r') as f:
                config_dict = json.load(f)
        elif isinstance(config, Dict):
            config_dict = dict(config)
        elif isinstance(config, CheckSpec):
            config_dict = asdict(config)
        else:
            raise TypeError(f"config must be a str, Dict, or CheckSpec, but got {type(config)}")

        config_dict.update(kwargs)

        return cls(**config_dict)


def load_suite(path: str) -> List[CheckSpec]:
    """Read a JSON list of CheckSpec dicts."""
    with open(path, 'r') as f:
        entries = json.load(f)
    if not isinstance(entries, list):
        raise TypeError(f"a suite file must hold a JSON list, but got {type(entries)}")
    return [CheckSpec.load(entry) for entry in entries]


def _pairs(bound: int):
    return [(a, b) for a in range(1, bound) for b in range(1, bound) if a + b <= bound]


def _half(twice: int) -> str:
    return str(Spin(twice))


def acceptance_suite(include_numeric: bool = True, q_values: Optional[List[float]] = None) -> List[CheckSpec]:
    """
    The full acceptance run: every check at its desk-scale parameters, followed
    by a numeric re-run of each exact check when ``include_numeric``.
    """
    main_pairs = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3)]
    specs = [CheckSpec("fm", _half(a), _half(b), degree=6) for a, b in main_pairs]
    specs += [CheckSpec("fm_alt", _half(a), _half(b), degree=4) for a, b in main_pairs]
    specs += [CheckSpec("k_consistency", _half(n), degree=8) for n in (1, 2, 3)]
    specs += [CheckSpec("r_closed", _half(n)) for n in (1, 2, 3, 4)]
    specs += [CheckSpec("r_fusion", _half(a), _half(b)) for a, b in _pairs(4)]
    specs += [CheckSpec("band", _half(a), _half(b)) for a in (1, 2, 3) for b in (1, 2, 3)]
    specs += [CheckSpec("ef", _half(n)) for n in (1, 2, 3)]
    specs += [CheckSpec("unitarity", _half(a), _half(b)) for a, b in _pairs(4)]
    triples = [(a, b, c) for a in (1, 2) for b in (1, 2) for c in (1, 2) if a + b + c <= 4]
    specs += [CheckSpec("ybe", _half(a), _half(b), _half(c)) for a, b, c in triples]
    specs += [CheckSpec("mixed", _half(a), _half(b), _half(c)) for a, b, c in triples]
    specs += [CheckSpec("rhat_fusion", _half(a), _half(b)) for a, b in _pairs(4)]
    specs += [CheckSpec("limit", _half(a), _half(b)) for a, b in _pairs(4)]
    specs += [CheckSpec("words", max_n=5), CheckSpec("delta", max_m=3, degree=8)]
    specs += [CheckSpec("ddr", _half(a), _half(b)) for a in (1, 2, 3) for b in (1, 2, 3)]
    specs += [CheckSpec("gauge", "1/2", "1/2", degree=4), CheckSpec("gauge", "1/2", "1", degree=4)]
    specs += [CheckSpec("mutation", degree=4, count=10)]
    if include_numeric:
        q_values = q_values or [1.3, 1.7]
        specs += [CheckSpec.load(spec, backend="numeric", q_values=list(q_values))
                  for spec in list(specs) if spec.name not in ("words", "mutation")]
    return specs
