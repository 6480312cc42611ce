"""Command line scenario runner.

Every command is a pure function of its config file: floats are written
with 17 significant digits and columns come in a fixed order, so repeated
runs produce identical bytes.

Exit status: 0 when all checks pass, 1 when a physical check fails (the
report is still written), 2 for usage or configuration errors.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .bloch import bloch_to_matrix, matrix_to_bloch, matrix_to_bloch2
from .config import ConfigError, ScenarioConfig, load_config
from .cp import choi_of_map, dynamics_verdict
from .evolution import EvolutionMap, expm, generator_family
from .generators import (
    cp_inequalities,
    dissipator_matrix,
    full_generator,
    kossakowski_check,
    positivity_check,
    weisskopf_wigner_generator,
)
from .linalg import psd_check
from .observables import decay_rate
from .twokaon import singlet, trotter_negative_mass_bound, two_kaon_witness

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
TROTTER_RATIO_BAND = (1.8, 2.2)


# -- serialization -----------------------------------------------------------


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.16e}"
    return str(v)


def dump_json(obj, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dump_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dump_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        return "null"
    return fmt(obj)


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        lines += [",".join(fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {"columns": self.columns, "rows": [list(r) for r in self.rows], "metadata": self.metadata}
        return dump_json(doc) + "\n"


def _complex_pairs(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _metadata(cfg: ScenarioConfig, command: str) -> dict:
    return {
        "command": command,
        "hamiltonian": _complex_pairs(cfg.hamiltonian.h),
        "dissipative_params": cfg.params.as_dict(),
        "time_grid": [float(cfg.times[0]), float(cfg.times[-1]), len(cfg.times) - 1],
        "trotter_n": cfg.trotter_n,
    }


# -- commands ----------------------------------------------------------------


def cp_summary(cfg: ScenarioConfig) -> dict:
    p = cfg.params
    ineq = cp_inequalities(p)
    kos_ok, kos_min = kossakowski_check(p)
    pos_ok, pos_min = positivity_check(p)
    family = generator_family(full_generator(cfg.hamiltonian, p))
    sweep = []
    for t in cfg.times:
        ok, lo = psd_check(choi_of_map(family(t)).matrix)
        sweep.append({"t": float(t), "min_eigenvalue": lo, "psd": ok})
    return {
        "verdict": dynamics_verdict(p),
        "inequalities": [
            {"name": q.name, "lhs": q.lhs, "rhs": q.rhs, "margin": q.margin, "holds": q.holds}
            for q in ineq.inequalities
        ],
        "choi_sweep": sweep,
        "ineq_all_hold": ineq.all_hold,
        "ineq_min_margin": ineq.min_margin,
        "kossakowski_min_eigenvalue": kos_min,
        "kossakowski_psd": kos_ok,
        "rate_block_min_eigenvalue": pos_min,
        "positive": pos_ok,
        "choi_all_psd": all(r["psd"] for r in sweep),
        "choi_min_eigenvalue": min(r["min_eigenvalue"] for r in sweep),
    }


def run_check_cp(cfg: ScenarioConfig):
    s = cp_summary(cfg)
    meta = _metadata(cfg, "check-cp")
    for k in ("ineq_all_hold", "ineq_min_margin", "kossakowski_min_eigenvalue", "kossakowski_psd",
              "rate_block_min_eigenvalue", "positive", "choi_all_psd", "choi_min_eigenvalue"):
        meta[k] = s[k]
    report = {
        "verdict": s["verdict"],
        "inequalities": s["inequalities"],
        "choi_sweep": s["choi_sweep"],
        "metadata": meta,
    }
    table = Table(
        ["t", "choi_min_eigenvalue", "choi_psd"],
        [(r["t"], r["min_eigenvalue"], r["psd"]) for r in s["choi_sweep"]],
        meta,
    )
    status = EXIT_OK if s["verdict"] == "CP" else EXIT_CHECK_FAILED
    return report, table, status


def run_evolve(cfg: ScenarioConfig):
    family = generator_family(full_generator(cfg.hamiltonian, cfg.params))
    meta = _metadata(cfg, "evolve")
    meta["system"] = cfg.system
    if cfg.system == "two-kaon":
        rho0 = singlet().matrix
        cols = ["t"] + [f"rho{m}{n}" for m in range(4) for n in range(4)]
        table = Table(cols + ["trace", "min_eigenvalue"], metadata=meta)
        for t in cfg.times:
            one = family(t)
            state = EvolutionMap(np.kron(one, one)).apply(rho0)
            lo = float(np.linalg.eigvalsh(state)[0])
            table.rows.append((float(t), *matrix_to_bloch2(state), float(np.trace(state).real), lo))
        return table, EXIT_OK

    rho0 = cfg.initial_state
    names = list(cfg.observables)
    series = {}
    for name, obs in cfg.observables.items():
        try:
            series[name] = decay_rate(rho0, obs, family, cfg.times).values
        except ValueError:
            # no overlap with the initial state: the normalized rate is undefined
            series[name] = np.full(len(cfg.times), np.nan)
    cols = ["t", "rho0", "rho1", "rho2", "rho3", "trace", "min_eigenvalue"]
    table = Table(cols + [f"R_{n}" for n in names], metadata=meta)
    r0 = matrix_to_bloch(rho0)
    for k, t in enumerate(cfg.times):
        r = family(t) @ r0
        lo = float(np.linalg.eigvalsh(bloch_to_matrix(r))[0])
        table.rows.append((float(t), *r, 2 * r[0], lo, *(series[n][k] for n in names)))
    return table, EXIT_OK


def _require_simple_dissipator(cfg: ScenarioConfig):
    p = cfg.params
    if p.a or p.b or p.c:
        raise ConfigError("dissipative_params", "two-kaon analysis needs a = b = c = 0")
    if p.alpha * p.gamma < p.beta**2:
        raise ConfigError("dissipative_params", "alpha*gamma < beta^2: dissipative map is not positive")
    return p.alpha, p.beta, p.gamma


def run_two_kaon(cfg: ScenarioConfig):
    al, be, ga = _require_simple_dissipator(cfg)
    meta = _metadata(cfg, "two-kaon")
    cols = ["t", "witness_u", "witness_closed_form", "negative_mass", "bound_rhs", "bound_holds"]
    table = Table(cols, metadata=meta)
    for t in cfg.times:
        w = two_kaon_witness(al, be, ga, t)
        b = trotter_negative_mass_bound(cfg.hamiltonian, al, be, ga, t, cfg.trotter_n)
        table.rows.append((float(t), w.value_u, w.closed_form, b.lhs, b.rhs, b.holds))
    ok = all(row[-1] for row in table.rows)
    return table, EXIT_OK if ok else EXIT_CHECK_FAILED


def trotter_errors(w_gen, t_gen, t: float, ns):
    """Frobenius distance of (e^{W t/n} e^{T t/n})^n from e^{(W+T) t} for each n."""
    exact = expm(t * (w_gen + t_gen))
    out = []
    for n in ns:
        step = expm(t / n * w_gen) @ expm(t / n * t_gen)
        out.append(float(np.linalg.norm(np.linalg.matrix_power(step, n) - exact)))
    return out


def run_trotter(cfg: ScenarioConfig):
    w_gen = weisskopf_wigner_generator(cfg.hamiltonian)
    t_gen = dissipator_matrix(cfg.params)
    t = float(cfg.times[-1])
    ns = [2**k for k in range(cfg.trotter_n.bit_length()) if 2**k <= cfg.trotter_n]
    errs = trotter_errors(w_gen, t_gen, t, ns)
    meta = _metadata(cfg, "trotter")
    meta["t"] = t
    table = Table(["n", "trotter_error", "ratio"], metadata=meta)
    for k, (n, e) in enumerate(zip(ns, errs)):
        ratio = errs[k - 1] / e if k and e > 0 else float("nan")
        table.rows.append((n, e, ratio))
    # commuting factors: Trotter is exact and ratios are rounding noise
    exact = max(errs) <= 1e-12 * max(1.0, float(np.linalg.norm(expm(t * (w_gen + t_gen)))))
    meta["commuting"] = exact
    last = table.rows[-1][2] if len(ns) > 1 else float("nan")
    ok = exact or (len(ns) > 1 and TROTTER_RATIO_BAND[0] <= last <= TROTTER_RATIO_BAND[1])
    return table, EXIT_OK if ok else EXIT_CHECK_FAILED


def sweep_row(cfg: ScenarioConfig, params) -> tuple:
    sub = ScenarioConfig(cfg.hamiltonian, params, cfg.times, cfg.trotter_n)
    s = cp_summary(sub)
    return (s["ineq_all_hold"], s["ineq_min_margin"], s["kossakowski_min_eigenvalue"],
            s["choi_min_eigenvalue"], s["choi_all_psd"], s["verdict"])


def run_sweep(cfg: ScenarioConfig):
    if not cfg.sweep:
        raise ConfigError("sweep", "no sweep axes given")
    names = list(cfg.sweep)
    meta = _metadata(cfg, "sweep")
    meta["axes"] = {k: [float(v[0]), float(v[-1]), len(v)] for k, v in cfg.sweep.items()}
    cols = names + ["ineq_all_hold", "ineq_min_margin", "kossakowski_min_eigenvalue",
                    "choi_min_eigenvalue", "choi_all_psd", "verdict"]
    table = Table(cols, metadata=meta)
    base = cfg.params.as_dict()
    for point in np.array(np.meshgrid(*cfg.sweep.values(), indexing="ij")).reshape(len(names), -1).T:
        values = dict(base, **{k: float(v) for k, v in zip(names, point)})
        params = type(cfg.params)(**values)
        table.rows.append((*(float(v) for v in point), *sweep_row(cfg, params)))
    return table, EXIT_OK


# -- entry point -------------------------------------------------------------

COMMANDS = {
    "check-cp": run_check_cp,
    "evolve": run_evolve,
    "two-kaon": run_two_kaon,
    "trotter": run_trotter,
    "sweep": run_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kaoncp",
        description="Dissipative neutral-kaon dynamics and complete-positivity checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--out", help="output path (default: config 'output' or stdout)")
        p.add_argument("--format", choices=("csv", "json"),
                       default="json" if name == "check-cp" else "csv")
    return parser


def render(command: str, cfg: ScenarioConfig, fmt_name: str):
    """Run a command; return (text, exit status)."""
    if command == "check-cp":
        report, table, status = run_check_cp(cfg)
        text = dump_json(report) + "\n" if fmt_name == "json" else table.to_csv()
        return text, status
    table, status = COMMANDS[command](cfg)
    return (table.to_json() if fmt_name == "json" else table.to_csv()), status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        text, status = render(args.command, cfg, args.format)
    except ConfigError as e:
        print(f"kaoncp: config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    out = args.out or cfg.output
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
