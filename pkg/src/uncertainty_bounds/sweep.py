"""(theta, phi) sweeps over the example systems, emitted as CSV rows."""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import bounds2
from .errors import ConfigError, DegenerateVariance, NotOrthogonal, SingularDenominator
from .hilbert import gram_schmidt_orthogonalize, moments, orthogonality_check
from .systems import SYSTEMS, build

FAMILY_IDS = (1, 2, 3, 4)
BASELINES = ("maccone_pati", "robertson", "schrodinger", "reverse_cov")
COMPANIONS = ("builtin",) + bounds2.ORTHOGONAL_MODES


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int

    def values(self):
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepConfig:
    system: str
    theta: Grid
    phi: Grid
    families: tuple = FAMILY_IDS
    baselines: tuple = BASELINES
    orthogonalize: bool = False
    companion: str = "builtin"
    cutoff: int | None = None
    output_path: str | None = None


def _grid(value, key):
    if isinstance(value, bool):
        raise ConfigError(f"{key} must be a number or a {{start, stop, count}} object", key)
    if isinstance(value, (int, float)):
        return Grid(float(value), float(value), 1)
    if not isinstance(value, dict):
        raise ConfigError(f"{key} must be a number or a {{start, stop, count}} object", key)
    for sub in ("start", "stop", "count"):
        if sub not in value:
            raise ConfigError(f"{key}.{sub} is required", f"{key}.{sub}")
    try:
        start, stop = float(value["start"]), float(value["stop"])
    except (TypeError, ValueError):
        raise ConfigError(f"{key}.start/stop must be numbers", key) from None
    count = value["count"]
    if isinstance(count, bool) or not isinstance(count, int) or count < 2:
        raise ConfigError(f"{key}.count must be an integer >= 2", f"{key}.count")
    if not start < stop:
        raise ConfigError(f"{key}.start must be < {key}.stop", f"{key}.start")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ConfigError(f"{key} bounds must be finite", key)
    return Grid(start, stop, count)


def parse_sweep_config(data):
    """Validate a JSON-decoded sweep config; errors name the offending key."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object", "<root>")
    known = {"system", "theta", "phi", "families", "baselines", "orthogonalize",
             "companion", "cutoff", "out", "outputPath"}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}", key)
    for key in ("system", "theta", "phi"):
        if key not in data:
            raise ConfigError(f"missing required key {key!r}", key)
    system = data["system"]
    if system not in SYSTEMS:
        raise ConfigError(f"system must be one of {SYSTEMS}", "system")
    families = data.get("families", list(FAMILY_IDS))
    if (not isinstance(families, list) or not families
            or any(f not in FAMILY_IDS or isinstance(f, bool) for f in families)):
        raise ConfigError("families must be a nonempty list drawn from 1-4", "families")
    baselines = data.get("baselines", list(BASELINES))
    if not isinstance(baselines, list) or any(b not in BASELINES for b in baselines):
        raise ConfigError(f"baselines must be a list drawn from {BASELINES}", "baselines")
    ortho = data.get("orthogonalize", False)
    if not isinstance(ortho, bool):
        raise ConfigError("orthogonalize must be true or false", "orthogonalize")
    companion = data.get("companion", "builtin")
    if companion not in COMPANIONS:
        raise ConfigError(f"companion must be one of {COMPANIONS}", "companion")
    cutoff = data.get("cutoff")
    if cutoff is not None and (isinstance(cutoff, bool) or not isinstance(cutoff, int)):
        raise ConfigError("cutoff must be an integer or null", "cutoff")
    out = data.get("out", data.get("outputPath"))
    return SweepConfig(
        system=system,
        theta=_grid(data["theta"], "theta"),
        phi=_grid(data["phi"], "phi"),
        families=tuple(sorted(set(families))),
        baselines=tuple(b for b in BASELINES if b in baselines),
        orthogonalize=ortho,
        companion=companion,
        cutoff=cutoff,
        output_path=out,
    )


def columns(families, baselines):
    cols = ["theta", "phi", "dA2", "dB2", "sum"]
    for f in families:
        cols += [f"L{f}+", f"L{f}-", f"U{f}+", f"U{f}-"]
    cols += ["combinedL", "combinedU", "lowerSource", "upperSource"]
    if "maccone_pati" in baselines:
        cols += ["mp+", "mp-"]
    if "robertson" in baselines:
        cols.append("robertson")
    if "schrodinger" in baselines:
        cols.append("schrodinger")
    if "reverse_cov" in baselines:
        cols.append("reverseCov")
    cols += ["orthoOverlap", "repaired"]
    return cols


def _companion(system, psi, ref_perp, mode, orthogonalize):
    """Return ``(psi_perp or None, pre-repair overlap, repaired flag)``."""
    if mode == "builtin":
        overlap = orthogonality_check(psi, ref_perp)
        if overlap <= bounds2.ORTHO_TOL:
            return ref_perp, overlap, False
        if not orthogonalize:
            raise NotOrthogonal(
                f"companion state overlap {overlap:.3e} exceeds {bounds2.ORTHO_TOL}; "
                "pass --orthogonalize to apply Gram-Schmidt repair"
            )
        return gram_schmidt_orthogonalize(ref_perp, psi), overlap, True
    try:
        perp = bounds2.construct_orthogonal(system.A, system.B, psi, mode)
    except DegenerateVariance:
        return None, None, False
    return perp, orthogonality_check(psi, perp), False


def compute_row(system, theta, phi, families=FAMILY_IDS, baselines=BASELINES,
                orthogonalize=False, companion="builtin", strict=False):
    """One grid point's full bound panel as an ordered dict.

    With ``strict`` a degenerate variance propagates; otherwise the affected
    columns are ``None``.
    """
    psi, ref_perp = system.state_pair(theta, phi)
    m = moments(system.A, system.B, psi)
    row = dict.fromkeys(columns(families, baselines))
    row.update(theta=float(theta), phi=float(phi), dA2=m.var_a, dB2=m.var_b, sum=m.sum)

    needs_perp = any(f in (2, 4) for f in families) or "maccone_pati" in baselines
    perp, overlap, repaired = None, None, False
    if needs_perp:
        perp, overlap, repaired = _companion(system, psi, ref_perp, companion, orthogonalize)
    elif companion == "builtin":
        overlap = orthogonality_check(psi, ref_perp)
    row["orthoOverlap"] = overlap
    row["repaired"] = int(repaired)

    sets = []
    for f in families:
        try:
            if f in (2, 4):
                if perp is None:
                    raise DegenerateVariance("no companion state could be constructed")
                bps = bounds2.FAMILIES[f](system.A, system.B, psi, perp)
            else:
                bps = bounds2.FAMILIES[f](system.A, system.B, psi)
        except DegenerateVariance:
            if strict:
                raise
            continue
        sets.append(bps)
        row[f"L{f}+"], row[f"L{f}-"] = bps.lower_plus, bps.lower_minus
        row[f"U{f}+"], row[f"U{f}-"] = bps.upper_plus, bps.upper_minus
    if sets:
        comb = bounds2.combined(sets)
        row.update(combinedL=comb.lower, combinedU=comb.upper,
                   lowerSource=comb.lower_source, upperSource=comb.upper_source)

    if "maccone_pati" in baselines and perp is not None:
        row["mp+"], row["mp-"] = bounds2.maccone_pati(system.A, system.B, psi, perp)
    if "robertson" in baselines:
        row["robertson"] = bounds2.robertson(system.A, system.B, psi)
    if "schrodinger" in baselines:
        row["schrodinger"] = bounds2.schrodinger(system.A, system.B, psi)
    if "reverse_cov" in baselines:
        try:
            row["reverseCov"] = bounds2.reverse_cov(system.A, system.B, psi)
        except DegenerateVariance:
            if strict:
                raise
        except SingularDenominator:
            pass
    return row


def iter_rows(config):
    system = build(config.system, config.cutoff)
    for theta in config.theta.values():
        for phi in config.phi.values():
            yield compute_row(system, theta, phi, config.families, config.baselines,
                              config.orthogonalize, config.companion)


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(rows, cols, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in cols])


def run_sweep(config):
    """Render the whole sweep as CSV text (rows in theta-outer, phi-inner order)."""
    buf = io.StringIO()
    write_csv(iter_rows(config), columns(config.families, config.baselines), buf)
    return buf.getvalue()
