"""Command-line front end: one JSON instance file, one subcommand per view.

Exit codes: 0 verdict computed, 1 violation found under --expect-semistable,
2 error (including budget exhaustion, which is reported as such).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .decomp import (
    decompose_pair,
    is_basic,
    mu_of_decomposition,
    pair_marginals,
    couple_tree,
    tree_decompose,
    tree_decomposition_to_json,
    tree_reconstruct,
)
from .exactpoly import RatPoly, format_rat, parse_rat
from .kingrep import (
    DEFAULT_BUDGET,
    GIT_MODES,
    MODES,
    UNSTABLE,
    BudgetExceeded,
    QuiverRep,
    check_semistable,
    git_check,
    gr_jordan_holder,
    parse_arrow_key,
)
from .quiver import Arrow, Quiver, validate_tree
from .sheafcalc import (
    STRICT_VIOLATION,
    GiesekerData,
    SectionalData,
    SheafParams,
    SubProfile,
    boundedness_bound,
    gieseker_l,
    gieseker_weight_identities,
    lps_bound,
    sectional_delta,
    semistable_profiles,
    special_profile,
    tau_from_sigma,
    theta_sheaf,
    triple_theta,
)
from .weights import as_weights, compatible_flags, flag_weight, mu_hom, mu_linearized

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2


class InstanceError(ValueError):
    """The instance file is malformed or misses a section the command needs."""


@dataclass
class Instance:
    raw: dict
    quiver: Quiver
    rep: QuiverRep | None = None
    b: dict | None = None

    def section(self, name: str) -> dict:
        if name not in self.raw:
            raise InstanceError(f"instance has no {name!r} section")
        return self.raw[name]

    def need_rep(self) -> QuiverRep:
        if self.rep is None:
            raise InstanceError("instance has no representation (dims/matrices)")
        return self.rep

    def need_b(self) -> dict:
        if self.b is None:
            raise InstanceError("instance has no arrow weights 'b'")
        return self.b


# -- parsing -------------------------------------------------------------------

def per_vertex(q: Quiver, data, name: str, conv: Callable = parse_rat) -> dict:
    """Read per-vertex data given as a list (vertex order) or a {"i": value} map."""
    if isinstance(data, list):
        if len(data) != q.n:
            raise InstanceError(f"{name}: {len(data)} entries for {q.n} vertices")
        items = zip(q.vertices, data)
    elif isinstance(data, dict):
        items = []
        for k, v in data.items():
            try:
                i = int(k)
            except ValueError as exc:
                raise InstanceError(f"{name}: vertex label {k!r} is not an integer") from exc
            q.check_vertex(i)
            items.append((i, v))
        missing = set(q.vertices) - {i for i, _ in items}
        if missing:
            raise InstanceError(f"{name}: no entry for vertices {sorted(missing)}")
    else:
        raise InstanceError(f"{name}: expected a list or an object")
    out = {}
    for i, v in items:
        try:
            out[i] = conv(v)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InstanceError(f"{name}[{i}]: {exc}") from exc
    return out


def per_arrow(q: Quiver, data, name: str, conv: Callable = parse_rat) -> dict:
    if not isinstance(data, dict):
        raise InstanceError(f"{name}: expected an object keyed by 't->h'")
    out = {}
    for k, v in data.items():
        a = parse_arrow_key(k)
        if a not in q.arrows:
            raise InstanceError(f"{name}: {k} is not an arrow of the quiver")
        try:
            out[a] = conv(v)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InstanceError(f"{name}[{k}]: {exc}") from exc
    missing = [a for a in q.arrows if a not in out]
    if missing:
        raise InstanceError(f"{name}: no entry for arrow {missing[0][0]}->{missing[0][1]}")
    return out


def _arrow(q: Quiver, key) -> Arrow:
    a = parse_arrow_key(key) if isinstance(key, str) else (int(key[0]), int(key[1]))
    return q.check_arrow(a)


def parse_instance_data(data) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    if "quiver" not in data:
        raise InstanceError("instance has no 'quiver' section")
    q = Quiver.from_json(data["quiver"])
    rep = QuiverRep.from_json(data) if "dims" in data else None
    b = per_arrow(q, data["b"], "b") if "b" in data else None
    return Instance(data, q, rep, b)


def parse_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_instance_data(data)


# -- subcommands ---------------------------------------------------------------
# each returns (report dict, violation flag)

def cmd_tree_check(inst: Instance, args):
    v = validate_tree(inst.quiver)
    return {"tree": v.ok, "reason": v.reason}, False


def _pbar_arg(inst: Instance):
    if "Pbar" not in inst.raw:
        return None
    return per_vertex(inst.quiver, inst.raw["Pbar"], "Pbar")


def cmd_king_check(inst: Instance, args):
    rep = inst.need_rep()
    mode = args.mode or "exhaustive-ff"
    if mode not in MODES:
        raise InstanceError(f"--mode must be one of {', '.join(MODES)}")
    v = check_semistable(rep, inst.need_b(), _pbar_arg(inst), mode, args.budget, args.seed)
    return v.to_json(rep.field), v.status == UNSTABLE


def cmd_git_check(inst: Instance, args):
    rep = inst.need_rep()
    mode = args.mode or "exhaustive-ff"
    if mode not in GIT_MODES:
        raise InstanceError(f"--mode must be one of {', '.join(GIT_MODES)}")
    v = git_check(rep, inst.need_b(), mode, args.budget)
    return v.to_json(rep.field), v.status == UNSTABLE


def cmd_gr(inst: Instance, args):
    rep = inst.need_rep()
    factors = gr_jordan_holder(rep, inst.need_b(), _pbar_arg(inst), args.budget)
    return {"factors": [f.to_json() for f in factors],
            "factor_dims": [list(f.dim_vector()) for f in factors]}, False


def _lambda(inst: Instance, data, name="lambda") -> dict:
    return per_vertex(inst.quiver, data, name, lambda w: as_weights(w))


def cmd_decompose(inst: Instance, args):
    rep = inst.need_rep()
    point = rep.to_point()
    lam = _lambda(inst, inst.section("lambda"))
    arrows, ok = {}, True
    for a in inst.quiver.arrows:
        f = point.maps[a]
        pd = decompose_pair(f, lam[a[0]], lam[a[1]])
        rec = pd.delta() == lam[a[0]] and pd.gamma() == lam[a[1]]
        add = mu_of_decomposition(f, pd) == mu_hom(f, lam[a[0]], lam[a[1]])
        ok = ok and rec and add
        arrows[f"{a[0]}->{a[1]}"] = dict(pd.to_json(), reconstruction="OK" if rec else "FAILED",
                                         mu_additive="OK" if add else "FAILED")
    td = tree_decompose(point, lam)
    back = tree_reconstruct(td, point.dims, inst.quiver.vertices)
    tree_ok = all(back[i] == lam[i] for i in inst.quiver.vertices)
    basic = all(is_basic(dict(zip(inst.quiver.vertices, k)), point) for k in td)
    report = {
        "arrows": arrows,
        "tree": tree_decomposition_to_json(td),
        "tree_reconstruction": "OK" if tree_ok else "FAILED",
        "all_basic": basic,
        "reconstruction": "OK" if ok and tree_ok else "FAILED",
    }
    return report, False


def _pair_map(data, name: str) -> dict:
    out = {}
    for k, v in data.items():
        try:
            x, y = (int(s) for s in str(k).split(","))
        except ValueError as exc:
            raise InstanceError(f"{name}: pair key {k!r} is not 'x,y'") from exc
        out[(x, y)] = parse_rat(v)
    return out


def cmd_couple(inst: Instance, args):
    sec = inst.section("couple")
    q = inst.quiver
    dims = per_vertex(q, sec.get("dims", inst.raw.get("dims")), "dims", int)
    pairs = {_arrow(q, k): _pair_map(v, f"pairs[{k}]") for k, v in sec["pairs"].items()}
    masses = None
    if "masses" in sec:
        masses = per_vertex(q, sec["masses"], "masses",
                            lambda m: {int(k): parse_rat(c) for k, c in m.items()})
    td = couple_tree(q, dims, pairs, masses)
    marg = pair_marginals(td, q, dims)
    match = all(marg[a] == {k: v for k, v in sorted(pairs.get(a, {}).items()) if v != 0
                            and not (k[0] in (0, dims[a[0]]) and k[1] in (0, dims[a[1]]))}
                for a in q.arrows)
    return {"coupling": tree_decomposition_to_json(td),
            "marginals": "OK" if match else "MISMATCH"}, False


def cmd_mu(inst: Instance, args):
    point = inst.need_rep().to_point()
    b = inst.b or {a: Fraction(1) for a in inst.quiver.arrows}
    values = [format_rat(mu_linearized(point, _lambda(inst, lam, f"lambdas[{k}]"), b))
              for k, lam in enumerate(inst.section("lambdas"))]
    return {"mu": values}, False


def cmd_flag_weight(inst: Instance, args):
    point = inst.need_rep().to_point()
    b = inst.need_b()
    requested = inst.raw.get("multi_indices", "all")
    flags = (list(compatible_flags(point)) if requested == "all" else
             [per_vertex(inst.quiver, jj, f"multi_indices[{k}]", int) for k, jj in enumerate(requested)])
    rows, ok = [], True
    for jj in flags:
        fw = flag_weight(point, jj, b)
        basic = is_basic(jj, point)
        ok = ok and fw.exact_mu <= fw.closed_form and (fw.equal or not basic)
        rows.append({"multi_index": [jj[i] for i in inst.quiver.vertices],
                     "closed_form": format_rat(fw.closed_form),
                     "exact_mu": format_rat(fw.exact_mu), "equal": fw.equal, "basic": basic})
    return {"flags": rows, "ess_bound": "OK" if ok else "FAILED"}, False


def sheaf_params(inst: Instance) -> SheafParams:
    sec = inst.section("sheaf")
    q = inst.quiver
    poly = RatPoly.parse
    return SheafParams(q, int(sec["dimX"]), per_vertex(q, sec["Pbar"], "sheaf.Pbar", poly),
                       per_vertex(q, sec["sigma"], "sheaf.sigma", poly), inst.need_b(),
                       per_vertex(q, sec["r"], "sheaf.r"))


def _profile(inst: Instance, params: SheafParams, data, name: str) -> SubProfile:
    kind = data.get("kind")
    q = inst.quiver
    if kind is None:
        return SubProfile(per_vertex(q, data["P"], f"{name}.P", RatPoly.parse),
                          per_vertex(q, data["rk"], f"{name}.rk"))
    if kind == "torsion":
        tors = per_vertex(q, data["torsion"], f"{name}.torsion", RatPoly.parse)
        return special_profile(params, "torsion", torsion=tors)
    if kind == "split_arrow":
        return special_profile(params, "split_arrow", a0=_arrow(q, data["a0"]))
    if kind == "boundedness":
        return special_profile(params, "boundedness", i0=int(data["i0"]),
                               G_P=data["G_P"], G_rk=data["G_rk"])
    raise InstanceError(f"{name}: unknown profile kind {kind!r}")


def cmd_sheaf_theta(inst: Instance, args):
    params = sheaf_params(inst)
    profs = [_profile(inst, params, d, f"profiles[{k}]")
             for k, d in enumerate(inst.section("sheaf").get("profiles", []))]
    thetas = [theta_sheaf(params, p).to_json() for p in profs]
    v = semistable_profiles(params, profs)
    report = {"theta": thetas, "status": v.status, "scope": v.tag,
              "witness": v.witness, "max_theta": v.theta.to_json() if v.theta is not None else None}
    return report, v.status == STRICT_VIOLATION


def cmd_triple(inst: Instance, args):
    sec = inst.section("triple")
    amb = [sec[k] for k in ("P1", "r1", "P2", "r2")]
    values = []
    for prof in sec.get("profiles", []):
        th = triple_theta(sec["sigma1"], sec["sigma2"], prof["PF1"], prof["rkF1"],
                          prof["PF2"], prof["rkF2"], *amb)
        values.append(th)
    report = {"theta": [t.to_json() for t in values]}
    if "tau" in sec:
        t = sec["tau"]
        report["tau"] = format_rat(tau_from_sigma(t["mu2"], t["r2"], t["sigma"]))
    return report, any(t > 0 for t in values)


def cmd_sectional(inst: Instance, args):
    sec = inst.section("sectional")
    q = inst.quiver
    base = dict(s=per_vertex(q, sec["s"], "sectional.s"), b=inst.need_b(),
                chi=per_vertex(q, sec["chi"], "sectional.chi"),
                rkE=per_vertex(q, sec["rkE"], "sectional.rkE"))
    deltas = []
    for k, prof in enumerate(sec.get("profiles", [])):
        data = SectionalData(q, hdim=per_vertex(q, prof["hdim"], f"profiles[{k}].hdim"),
                             rkF=per_vertex(q, prof["rkF"], f"profiles[{k}].rkF"), **base)
        deltas.append(sectional_delta(data))
    return {"delta": [format_rat(d) for d in deltas]}, any(d > 0 for d in deltas)


def cmd_gieseker(inst: Instance, args):
    sec = inst.section("gieseker")
    q = inst.quiver
    gd = GiesekerData(per_vertex(q, sec["p"], "gieseker.p"),
                      per_vertex(q, sec["sigma_m"], "gieseker.sigma_m"),
                      per_vertex(q, sec["r"], "gieseker.r"))
    gw = gieseker_l(q, inst.need_b(), gd)
    report = {"l": {str(i): format_rat(v) for i, v in sorted(gw.l.items())},
              "alpha": {f"{i}:{a[0]}->{a[1]}": format_rat(v) for (i, a), v in sorted(gw.alpha.items())}}
    ids = []
    for d in sec.get("identities", []):
        w = gieseker_weight_identities(d["p"], d["r"], d["sigma_m"], d["j"], d["rk_j"])
        ids.append({"mu": format_rat(w.mu), "holds": w.holds()})
    if ids:
        report["identities"] = ids
    return report, False


def cmd_bounds(inst: Instance, args):
    sec = inst.section("bounds")
    report = {}
    if "boundedness" in sec:
        params = sheaf_params(inst)
        rows = []
        for i0 in sec["boundedness"]:
            c = boundedness_bound(params, int(i0))
            rows.append({"i0": int(i0), "C": format_rat(c.C), "degenerate": c.degenerate,
                         "statement": c.statement(int(i0))})
        report["boundedness"] = rows
    if "lps" in sec:
        report["lps"] = [format_rat(lps_bound(d["rk"], d["mu_max"], d["mu"], d["m"], int(d["dimX"])))
                         for d in sec["lps"]]
    return report, False


COMMANDS = {
    "tree-check": cmd_tree_check,
    "king-check": cmd_king_check,
    "git-check": cmd_git_check,
    "gr": cmd_gr,
    "decompose": cmd_decompose,
    "couple": cmd_couple,
    "mu": cmd_mu,
    "flag-weight": cmd_flag_weight,
    "sheaf-theta": cmd_sheaf_theta,
    "triple": cmd_triple,
    "sectional": cmd_sectional,
    "gieseker": cmd_gieseker,
    "bounds": cmd_bounds,
}


# -- output --------------------------------------------------------------------

def render_text(report: dict) -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        elif v is None:
            v = "-"
        lines.append(f"{k}: {v}")
    return "\n".join(lines)


def run(command: str, inst: Instance, args) -> tuple[dict, int]:
    report, violated = COMMANDS[command](inst, args)
    code = EXIT_VIOLATION if (violated and args.expect_semistable) else EXIT_OK
    return report, code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quivstab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("instance", help="JSON instance file")
        p.add_argument("--mode", help="subrep/flag source for king-check and git-check")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--expect-semistable", action="store_true",
                       help="exit 1 when a violation is found")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized mode")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inst = parse_instance(args.instance)
        report, code = run(args.command, inst, args)
    except BudgetExceeded as exc:
        print(f"budget-exceeded: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        print(json.dumps({"command": args.command, "exit": code, "report": report},
                         sort_keys=True, indent=2))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
