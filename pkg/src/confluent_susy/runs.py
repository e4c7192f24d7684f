"""Run configurations shared by the CLI and the verification suites."""
from dataclasses import asdict, dataclass, field, replace
import math
from typing import Optional

import numpy as np

from . import __version__
from .errors import DomainError
from .grid import make_grid
from .models import free as free_model
from .models import lame as lame_model
from .susy import confluent_partner_differential, singularity_scan
from .verify import periodic_band_structure

MODELS = ("free", "lame")


@dataclass(frozen=True)
class RunConfig:
    model: str = "free"
    kappa1: Optional[float] = None
    m: Optional[float] = None
    epsilon1: Optional[float] = None
    D: Optional[float] = None
    x0: float = 0.0
    grid: Optional[tuple] = None
    branch: str = "auto"
    orientation: str = free_model.GROWING
    format: str = "csv"
    output: Optional[str] = None

    def resolved(self):
        """Fill derived parameters (kappa1 <-> eps1, D from x0, default grid) and validate."""
        if self.model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}")
        cfg = self
        if cfg.model == "free":
            kappa, eps = cfg.kappa1, cfg.epsilon1
            if kappa is None and eps is None:
                raise DomainError("free model needs --kappa or --epsilon")
            if kappa is None:
                kappa = free_model.kappa_from_energy(eps)
            elif eps is None:
                eps = -kappa * kappa
            elif not math.isclose(eps, -kappa * kappa, rel_tol=1e-12):
                raise DomainError(f"kappa1={kappa} and eps1={eps} violate eps1 = -kappa1^2")
            if kappa <= 0:
                raise DomainError("kappa1 must be positive")
            D = cfg.D if cfg.D is not None else free_model.D_from_x0(kappa, cfg.x0, cfg.orientation)
            grid = cfg.grid if cfg.grid is not None else (cfg.x0 - 10.0, cfg.x0 + 10.0, 2001)
            cfg = replace(cfg, kappa1=float(kappa), epsilon1=float(eps), D=float(D), grid=grid)
        else:
            if cfg.m is None or cfg.epsilon1 is None or cfg.D is None:
                raise DomainError("lame model needs --m, --epsilon and --D")
            if not 0.0 < cfg.m < 1.0:
                raise DomainError(f"m must lie in (0, 1), got {cfg.m}")
            branch = cfg.branch
            if branch == "auto":
                branch = lame_model.choose_branch(cfg.m, cfg.epsilon1, cfg.D)
            grid = cfg.grid if cfg.grid is not None else (-20.0, 20.0, 4001)
            cfg = replace(cfg, branch=branch, grid=grid)
        xmin, xmax, n = cfg.grid
        make_grid(xmin, xmax, int(n))
        return replace(cfg, grid=(float(xmin), float(xmax), int(n)))

    def metadata(self):
        meta = {k: v for k, v in asdict(self).items() if k not in ("format", "output")}
        meta["grid"] = list(self.grid) if self.grid is not None else None
        if self.model == "free":
            meta.pop("m")
            meta.pop("branch")
        else:
            meta.pop("kappa1")
            meta.pop("orientation")
        meta["tool_version"] = __version__
        return meta


PROFILES = {
    "fig1": RunConfig(model="free", epsilon1=-1.0, x0=3.0, grid=(-5.0, 11.0, 1601)),
    "fig3": RunConfig(model="lame", m=0.5, epsilon1=0.1, D=-45.0, x0=0.0, grid=(-20.0, 20.0, 4001)),
    "fig4": RunConfig(model="lame", m=0.1, epsilon1=1.05, D=20.0, x0=0.0, grid=(-20.0, 20.0, 4001)),
}

CONFIG_KEYS = {"model", "kappa1", "m", "epsilon1", "D", "x0", "grid", "branch", "orientation",
               "format", "output"}


def config_from_mapping(data, base=None):
    """RunConfig from a JSON mapping (a bare metadata block or a whole output file)."""
    if "metadata" in data and isinstance(data["metadata"], dict):
        data = data["metadata"]
    unknown = set(data) - CONFIG_KEYS - {"tool_version"}
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    values = {k: v for k, v in data.items() if k in CONFIG_KEYS}
    if "grid" in values and values["grid"] is not None:
        values["grid"] = tuple(values["grid"])
    return overlay(base or RunConfig(), values)


def overlay(cfg, values):
    """Apply ``values`` on top of ``cfg``, dropping whatever they make stale.

    Switching model resets model parameters; setting only one of kappa1/epsilon1
    re-derives the other; for the free model a new x0 without D re-derives D.
    """
    values = dict(values)
    if "model" in values and values["model"] != cfg.model:
        cfg = RunConfig(format=cfg.format, output=cfg.output)
    if "kappa1" in values and "epsilon1" not in values:
        values["epsilon1"] = None
    if "epsilon1" in values and "kappa1" not in values:
        values["kappa1"] = None
    if values.get("model", cfg.model) == "free" and "x0" in values and "D" not in values:
        values["D"] = None
    return replace(cfg, **values)


def build_seed(cfg):
    """(ConfluentSeed, potential callable, LameSeed or None) for a resolved config."""
    if cfg.model == "free":
        return free_model.free_seed(cfg.kappa1, cfg.orientation), free_model.free_potential, None
    ls = lame_model.make_lame_seed(cfg.m, cfg.epsilon1, cfg.branch)
    return ls.as_confluent_seed(), (lambda t: lame_model.lame_potential(cfg.m, t)), ls


@dataclass(frozen=True, eq=False)
class PartnerDataset:
    config: RunConfig
    columns: dict = field(default_factory=dict)

    COLUMNS = ("x", "V", "Vt", "psi", "psi2")


def run_partner(cfg):
    """Partner potential and bound state on the configured grid.

    For the Lame model ``x0`` translates the whole picture: columns are V(x - x0) etc.
    """
    cfg = cfg.resolved()
    seed, V, _ = build_seed(cfg)
    x = make_grid(*cfg.grid)
    shift = cfg.x0 if cfg.model == "lame" else 0.0
    result = confluent_partner_differential(seed, cfg.D, V, x - shift)
    psi = result.bound_state.values
    cols = {
        "x": x,
        "V": np.asarray(V(x - shift), dtype=float),
        "Vt": result.partner_potential.values,
        "psi": psi,
        "psi2": psi * psi,
    }
    return PartnerDataset(config=cfg, columns=cols)


@dataclass(frozen=True)
class ScanResult:
    config: RunConfig
    D: np.ndarray
    nonsingular: np.ndarray
    crossing: list
    branch: list  # per-row Bloch branch (None for the free model)


def run_scan(cfg, d_lo, d_hi, samples):
    """Singularity scan over D in [d_lo, d_hi].

    With ``branch="auto"`` each Lame row uses the branch ``choose_branch`` would pick
    for that D, so a row is nonsingular when the CLI's partner command would succeed.
    """
    if not (math.isfinite(d_lo) and math.isfinite(d_hi)) or not d_hi > d_lo or samples < 2:
        raise DomainError(f"empty D range [{d_lo}, {d_hi}] with {samples} samples")
    Ds = np.linspace(d_lo, d_hi, int(samples))
    auto = cfg.model == "lame" and cfg.branch == "auto"
    base = replace(cfg, D=cfg.D if cfg.D is not None else float(Ds[0]))
    if auto:
        base = replace(base, branch=lame_model.BETA)
    base = base.resolved()
    x = make_grid(*base.grid)
    if base.model == "free":
        rows = singularity_scan(build_seed(base)[0], Ds, x)
        branches = [None] * len(rows)
    else:
        branch_names = [lame_model.choose_branch(base.m, base.epsilon1, D) if auto else base.branch
                        for D in Ds]
        seeds = {b: build_seed(replace(base, branch=b))[0] for b in set(branch_names)}
        rows = [singularity_scan(seeds[b], [D], x)[0] for b, D in zip(branch_names, Ds)]
        branches = branch_names
    out_cfg = replace(base, D=None, branch="auto" if auto else base.branch)
    return ScanResult(
        config=out_cfg,
        D=Ds,
        nonsingular=np.array([not r.singular for r in rows]),
        crossing=[r.crossing for r in rows],
        branch=branches,
    )


def run_bands(m, n_periods=16, points_per_period=400):
    """(analytic SpectrumBands, numeric edges sorted, BandStructure)."""
    bands = lame_model.lame_bands(m)
    T = 2.0 * lame_model.ell.complete_K(m)
    bs = periodic_band_structure(lambda t: lame_model.lame_potential(m, t), T, n_periods,
                                 points_per_period)
    return bands, np.sort(bs.edges), bs
