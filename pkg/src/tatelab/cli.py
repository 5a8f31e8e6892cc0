"""Batch command line: ``tatelab <subcommand> [flags]``.

Settings resolve as flags > TATE_* environment variables > a JSON config
file (``--config``) > built-in defaults.  Every subcommand produces one
result document; ``--json`` prints it as canonical JSON, otherwise a
two-column text table derived from the same payload.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import adelic, bruhat, characters, finite_field, local_zeta, padic, quadext
from .cyclotomic import RationalAngle

DEFAULTS = {"prec": 20, "tol": 1e-12, "prime_bound": 10**5, "enum_bound": 10**4}
ENV_PREFIX = "TATE_"
_CASTS = {"prec": int, "tol": float, "prime_bound": int, "enum_bound": int}


class UsageError(ValueError):
    pass


# -- values -----------------------------------------------------------------------------


def to_jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            raise ValueError("non-finite float in result")
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, RationalAngle):
        return str(x.theta)
    if isinstance(x, local_zeta.Pole):
        return x.to_json()
    if hasattr(x, "to_json"):
        return to_jsonable(x.to_json())
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in x]
        return sorted(items, key=json.dumps) if isinstance(x, (set, frozenset)) else items
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class ResultDocument:
    command: str
    inputs: dict
    result: object
    provenance: str
    error_bound: float | None = None
    meta: dict = field(default_factory=dict)

    def payload(self) -> dict:
        doc = {
            "command": self.command,
            "inputs": to_jsonable(self.inputs),
            "result": to_jsonable(self.result),
            "provenance": self.provenance,
        }
        if self.error_bound is not None:
            doc["error_bound"] = self.error_bound
        return doc


def emit(doc: ResultDocument, mode: str = "json") -> str:
    payload = doc.payload()
    if mode == "json":
        return json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=2) + "\n"
    rows = list(_flatten("", payload))
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _flatten(prefix: str, x):
    if isinstance(x, dict):
        for k in sorted(x):
            yield from _flatten(f"{prefix}.{k}" if prefix else k, x[k])
    elif isinstance(x, list) and x and all(isinstance(v, (dict, list)) for v in x):
        for i, v in enumerate(x):
            yield from _flatten(f"{prefix}[{i}]", v)
    else:
        yield prefix, json.dumps(x) if not isinstance(x, str) else x


# -- argument parsing helpers -------------------------------------------------------------


def parse_complex(text: str) -> complex:
    parts = [t.strip() for t in str(text).split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise UsageError(f"expected 're,im', got {text!r}")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational: {text!r}") from exc


def _pairs(items, value=parse_rational) -> dict[int, object]:
    out = {}
    for item in items or []:
        if ":" not in item:
            raise UsageError(f"expected PRIME:VALUE, got {item!r}")
        p, v = item.split(":", 1)
        out[int(p)] = value(v)
    return out


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def resolve_settings(args: argparse.Namespace, env=None) -> dict:
    env = os.environ if env is None else env
    config = load_config(getattr(args, "config", None))
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        env_val = env.get(ENV_PREFIX + key.upper())
        if flag is not None:
            out[key] = flag
        elif env_val is not None:
            out[key] = _CASTS[key](env_val)
        elif key in config:
            out[key] = _CASTS[key](config[key])
        else:
            out[key] = default
    return out


def _character(args) -> characters.MultCharacter:
    p = _need(args, "p")
    am = parse_rational(args.angle_minus) if args.angle_minus else Fraction(0)
    chi = characters.MultCharacter.from_angle(p, parse_rational(args.angle or "0"), 0j, am)
    if args.degree is not None and args.degree != chi.n:
        raise UsageError(f"the angle gives degree {chi.n}, not {args.degree}")
    return chi


def _need(args, name):
    v = getattr(args, name, None)
    if v is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    if name == "p" and (v < 2 or padic._prime_factors(v) != [v]):
        raise UsageError(f"--p must be a prime, got {v}")
    return v


def _s_values(args) -> list[complex]:
    return [parse_complex(t) for t in (args.s or ["0.5"])]


def _read_bruhat(path: str) -> bruhat.BruhatFunction:
    with open(path) as fh:
        return bruhat.BruhatFunction.from_json(json.load(fh))


def _adele(args, cls=adelic.Adele):
    prec = args.settings["prec"]
    over = {p: padic.PadicNumber.from_rational(v, 1, p, prec) for p, v in _pairs(args.override).items()}
    real = float(args.real) if args.real is not None else None
    return cls(parse_rational(args.r or "0"), over, real)


# -- handlers -----------------------------------------------------------------------------


def _series_report(p: int, kind: str, target: int, budget: int) -> dict:
    one = padic.PadicNumber.from_int(1, p, target)
    if kind == "geometric":
        # partial sums of p^i against 1/(1-p); the gap after k terms is -p^k/(1-p), valuation k
        limit = padic.PadicNumber.from_rational(1, 1 - p, p, target)
        terms = [padic.PadicNumber.from_int(p**i, p, target) for i in range(target)]
        gaps = [(s - limit).valuation for s in padic.partial_sums(terms)]
        total = padic.series_sum(terms, p, target)
        return {"sum": str(total), "matches_limit": total.equals(limit), "gap_valuations": gaps}
    # n * n! summed against -1
    rows, acc = [], None
    for n in range(1, budget + 1):
        term = padic.PadicNumber.from_int(n * math.factorial(n), p, target + padic.factorial_valuation(n, p) + 1)
        acc = term if acc is None else acc + term
        diff = acc + one
        v = diff.valuation if not diff.is_zero else padic.factorial_valuation(n + 1, p)
        rows.append({"terms": n, "valuation": min(v, padic.factorial_valuation(n + 1, p))})
        if rows[-1]["valuation"] >= target:
            break
    return {"reached": rows[-1]["valuation"] >= target, "terms_used": rows[-1]["terms"], "partial_valuations": rows}


def cmd_expand(args):
    p, prec = _need(args, "p"), args.settings["prec"]
    if args.series:
        res = _series_report(p, args.series, prec, args.budget)
        return {"p": p, "series": args.series, "target": prec, "budget": args.budget}, res, "p-adic series against its closed form"
    x = padic.from_rational(int(_need(args, "num")), int(args.den or 1), p, prec)
    res = {"text": str(x), "valuation": None if x.is_zero else padic.valuation(x), "digits": list(x.digits), "abs": padic.abs_p(x)}
    return {"p": p, "num": args.num, "den": args.den or 1, "prec": prec}, res, "p-adic digit expansion of a rational"


def _padic_arg(text: str, p: int, prec: int) -> padic.PadicNumber:
    if text.startswith("p="):
        return padic.PadicNumber.parse(text)
    return padic.PadicNumber.from_rational(parse_rational(text), 1, p, prec)


def cmd_arith(args):
    p, prec = _need(args, "p"), args.settings["prec"]
    x, y = _padic_arg(_need(args, "x"), p, prec), _padic_arg(_need(args, "y"), p, prec)
    ops = {"add": lambda: x + y, "sub": lambda: x - y, "mul": lambda: x * y, "div": lambda: x / y}
    r = ops[args.op]()
    return {"p": p, "op": args.op, "x": str(x), "y": str(y)}, {"text": str(r), "value": r}, "field operations in Q_p"


def cmd_inv(args):
    p, prec = _need(args, "p"), args.settings["prec"]
    x = _padic_arg(_need(args, "x"), p, prec)
    r = padic.inverse(x)
    return {"p": p, "x": str(x)}, {"text": str(r), "value": r}, "multiplicative inverse in Q_p"


def cmd_sqrt(args):
    p, prec = _need(args, "p"), args.settings["prec"]
    x = _padic_arg(_need(args, "x"), p, prec)
    r = padic.hensel_sqrt(x)
    res = {"exists": r is not None, "root": None if r is None else str(r)}
    return {"p": p, "x": str(x)}, res, "square roots by Hensel lifting"


def cmd_teichmuller(args):
    p, prec = _need(args, "p"), args.settings["prec"]
    z = padic.teichmuller(p, prec)
    return {"p": p, "prec": prec}, {"text": str(z), "residue": z.unit % p}, "Teichmüller lift of the least primitive root"


def cmd_squareclass(args):
    p = _need(args, "p")
    if args.x is None:
        table = [{"tag": c.tag, "representative": c.rational_representative(), "square": c.is_square} for c in quadext.all_classes(p)]
        return {"p": p}, table, "square classes of Q_p^x"
    x = parse_rational(args.x)
    c = quadext.square_class(padic.PadicNumber.from_rational(x, 1, p, max(args.settings["prec"], 4)))
    return {"p": p, "x": args.x}, {"tag": c.tag, "square": c.is_square}, "square class of a rational in Q_p^x"


def cmd_quadext(args):
    p = _need(args, "p")
    rows = []
    for c in quadext.all_classes(p):
        if c.is_square:
            continue
        row = {"tau": c.tag}
        if p != 2:
            d = quadext.classify_quadratic(c)
            row.update(e=d.e, f=d.f, norm_group=sorted(g.tag for g in quadext.norm_group(c)))
        rows.append(row)
    res = {"extensions": rows}
    if args.x is not None:
        prec = args.settings["prec"]
        tau = quadext.SquareClass.from_tag(p, _need(args, "tau")).rational_representative()
        a = quadext.QuadExtElement.make(tau, parse_rational(args.x), parse_rational(args.y or "0"), p, prec)
        n = quadext.norm(a)
        ac = a.abs_canonical()
        res["element"] = {
            "norm": str(n),
            "abs_normalized": a.abs_normalized(),
            "abs_canonical_squared": 0 if ac == 0 else ac.squared(),
        }
    return {"p": p, "tau": args.tau, "x": args.x, "y": args.y}, res, "quadratic extensions of Q_p"


def cmd_sgn_tau(args):
    p = _need(args, "p")
    tau = quadext.SquareClass.from_tag(p, _need(args, "tau"))
    x = parse_rational(_need(args, "x"))
    return {"p": p, "tau": tau.tag, "x": args.x}, {"sign": quadext.sgn_tau(tau, x)}, "the quadratic character attached to Q_p(sqrt tau)"


def cmd_char_eval(args):
    p = _need(args, "p")
    x = parse_rational(_need(args, "x"))
    if args.kind == "additive":
        chi = characters.AdditiveCharacter(p, parse_rational(args.t or "1"))
        a = chi(x)
        res = {"angle": a, "value": a.to_complex(), "conductor_exponent": chi.conductor_exponent()}
        res["fractional_part"] = characters.fractional_part(chi.t * x, p)
        return {"p": p, "t": str(chi.t), "x": args.x}, res, "additive character exp(2 pi i f_p(t x))"
    chi = _character(args)
    s = _s_values(args)[0]
    res = {"degree": chi.n, "value": characters.mult_eval(chi.with_s(s), x), "minus_one": characters.chi_minus_one(chi)}
    if p != 2 and chi.n:
        res["characters_of_this_degree"] = characters.enumerate_degree(p, chi.n)
    if characters.ord_p_rational(x, p) == 0:
        res["unit_angle"] = characters.mult_unit_angle(chi, x)
    return {"p": p, "angle": args.angle, "x": args.x, "s": s}, res, "multiplicative character of Q_p^x"


def cmd_product_formula(args):
    x = parse_rational(_need(args, "x"))
    total, places = padic.product_formula(x)
    res = {"product": total, "places": {str(p): v for p, v in places.items()}, "real": abs(x)}
    res["additive_witness"] = characters.product_principle_check(x)
    return {"x": args.x}, res, "product formula over all places of Q"


def cmd_fourier(args):
    f = _read_bruhat(_need(args, "input"))
    g = f
    for _ in range(args.times):
        g = bruhat.fourier(g)
    if args.reflect:
        g = bruhat.reflect(g)
    g = bruhat.canonicalize(g)
    res = {"function": g, "equals_input": g == f}
    return {"input": args.input, "times": args.times, "reflect": args.reflect}, res, "Fourier transform of a Bruhat function"


def cmd_integrate(args):
    if args.measure == "log":
        p, K = _need(args, "p"), args.terms
        v = bruhat.log_abs_integral(p, K)
        res = {"partial_sum": v, "limit": -math.log(p) / (p - 1)}
        return {"p": p, "terms": K, "measure": "log"}, res, "integral of log|x|_p over Z_p by shells", abs(v - res["limit"])
    f = _read_bruhat(_need(args, "input"))
    if args.measure == "additive":
        v = bruhat.integrate_additive(f)
        return {"input": args.input, "measure": "additive"}, {"exact": v, "value": v.to_complex()}, "additive Haar integral"
    chi = _character(args) if args.angle else characters.MultCharacter(f.p)
    out = []
    for s in _s_values(args):
        out.append({"s": s, "value": bruhat.integrate_multiplicative(f, chi.with_s(s))})
    return {"input": args.input, "measure": "multiplicative", "angle": args.angle}, out, "multiplicative Haar integral"


def cmd_mellin(args):
    chi = _character(args)
    v = bruhat.mellin_indicator_unit_exact(chi)
    return {"p": chi.p, "angle": args.angle}, {"exact": v, "value": bruhat.mellin_indicator_unit(chi)}, "Mellin transform of the unit indicator"


def cmd_zeta_local(args):
    chi = _character(args)
    if args.input:
        f = _read_bruhat(args.input)
    else:
        f = local_zeta.phi(chi.p, chi.n)
    rows = []
    for s in _s_values(args):
        c = chi.with_s(s)
        row = {"s": s, "value": local_zeta.local_zeta(f, c)}
        if not args.input and chi.n:
            row["closed_form"] = local_zeta.zeta_phi_closed_form(c)
        elif not args.input:
            row["closed_form"] = local_zeta.L_factor(c)
        if 0 < s.real < 1:
            cross, resid = local_zeta.functional_equation_check(f, local_zeta.phi(chi.p, chi.n), c)
            row["functional_equation"] = {"cross_residual": cross, "rho_residual": resid}
        rows.append(row)
    return {"p": chi.p, "angle": args.angle, "input": args.input}, rows, "local zeta integral over Q_p^x"


def cmd_gauss(args):
    chi = _character(args)
    g = local_zeta.gauss_sum(chi)
    res = {"value": g.value, "abs": abs(g.value), "p_half_n": chi.p ** (chi.n / 2), "exact": g.exact}
    p, n = chi.p, chi.n
    probes = [Fraction(1, p ** k) for k in range(n + 2)]
    res["unit_integrals"] = [{"v": v, "value": local_zeta.vanishing_lemma_check(chi, v)} for v in probes]
    return {"p": chi.p, "angle": args.angle}, res, "Gauss sum of a ramified character"


def cmd_epsilon(args):
    chi = _character(args)
    rows = [{"s": s, "epsilon": local_zeta.epsilon(chi.with_s(s)), "L": local_zeta.L_factor(chi.with_s(s))} for s in _s_values(args)]
    return {"p": chi.p, "angle": args.angle}, rows, "local epsilon and L factors"


def cmd_rho(args):
    w = float(args.w or 0)
    if args.sigma is not None:
        rows = [
            {"s": s, "rho": local_zeta.rho_arch(args.sigma, w, s), "gamma_R": local_zeta.gamma_R(s + args.sigma)} for s in _s_values(args)
        ]
        return {"place": "inf", "sigma": args.sigma, "w": w}, rows, "archimedean rho factor"
    chi = _character(args)
    omega = chi.with_s(complex(0, -w))
    rows = [{"s": s, "rho": local_zeta.rho_unitary(omega, s)} for s in _s_values(args)]
    return {"p": chi.p, "angle": args.angle, "w": w}, rows, "local rho factor"


def cmd_root_number(args):
    chi = _character(args)
    W = local_zeta.root_number(chi)
    return {"p": chi.p, "angle": args.angle}, {"W": W, "abs": abs(W)}, "root number of a unitary character"


def cmd_adele_reduce(args):
    x = _adele(args)
    d, r = adelic.fundamental_domain_reduce(x)
    res = {"d": d, "r": r, "in_domain": d.in_fundamental_domain()}
    return {"adele": x}, res, "reduction to the fundamental domain of A/Q"


def cmd_idele_decompose(args):
    x = _adele(args, adelic.Idele)
    q, u = adelic.idele_unit_decomposition(x)
    fin, inf = adelic.adelic_abs(x)
    res = {"q": q, "unit_idele": u, "abs_finite": fin, "abs_infinite": inf, "measure_scaling": adelic.measure_scaling(x)[0]}
    return {"idele": x}, res, "idele as rational times a unit idele"


def cmd_theta(args):
    x = float(_need(args, "x"))
    t, ti = adelic.theta(x), adelic.theta(1 / x)
    res = {"theta": t, "psi": adelic.psi(x), "theta_inverse": ti, "identity_residual": abs(ti - math.sqrt(x) * t)}
    return {"x": x}, res, "theta transformation law"


def cmd_zeta_global(args):
    bound = args.settings["prime_bound"]
    ram = {p: characters.MultCharacter.from_angle(p, a) for p, a in _pairs(args.char).items()}
    omega = adelic.GlobalCharacter(float(args.w or 0), ram, args.sigma or 0)
    rows, err = [], None
    for s in _s_values(args):
        row = {"s": s}
        if s.real > 1:
            L = adelic.global_L(omega, s, bound, workers=args.workers)
            row.update(euler=L.value, euler_error=L.error)
            err = L.error if err is None else max(err, L.error)
        if not omega.is_trivial:
            row["epsilon"] = adelic.global_epsilon(omega, s)
        elif s not in (0, 1):
            tol = args.settings["tol"]
            q = adelic.completed_zeta_with_error(s, tol)
            row.update(theta_route=q.value, theta_error=q.error, symmetric=adelic.completed_zeta(1 - s, tol))
        else:
            row["theta_route"] = local_zeta.Pole(s)
        rows.append(row)
    return {"prime_bound": bound, "character": {"w": omega.w, "sigma": omega.sigma, "ramified": args.char or []}}, rows, "completed Riemann zeta by Euler product and theta integral", err


def cmd_poisson(args):
    x = _adele(args, adelic.Idele)
    levels = {p: int(v) for p, v in _pairs(args.level, int).items()}
    r = adelic.poisson_check(x, levels)
    res = {"lhs": r.lhs, "rhs": r.rhs, "residual": r.residual, "lattice": r.lattice}
    return {"idele": x, "levels": levels}, res, "adelic Poisson summation for the standard function", r.residual


def cmd_ff(args):
    p = _need(args, "p")
    f, n = int(args.f or 1), int(args.n or 1)
    bound = args.settings["enum_bound"]
    rep = finite_field.norm_surjectivity_check(p, f, n, bound)
    F = finite_field.field(p, f * n)
    q = p**f
    res = {
        "modulus": list(F.modulus),
        "generator": F.element(F.generator()).coeffs,
        "frobenius_of_generator": finite_field.frobenius(F.element(F.generator()), q).coeffs,
        "frobenius_order": finite_field.frobenius_order(p, f, n, bound),
    }
    res["norm_surjective"] = rep.surjective
    res["norm_fibres"] = sorted(set(rep.fibre_sizes))
    if args.table:
        res["table"] = [
            {"x": x.coeffs, "norm": finite_field.norm(x, q).coeffs, "trace": finite_field.trace(x, q).coeffs} for x in F.elements()
        ]
    if args.k is not None:
        res["rec_q"] = {"k": args.k, "n": n, "image": finite_field.rec_q(args.k, n).k}
    return {"p": p, "f": f, "n": n}, res, "finite field extension, Frobenius, norm and trace"


# -- routing -----------------------------------------------------------------------------------


@dataclass(frozen=True)
class Route:
    handler: Callable
    operations: tuple[str, ...]
    flags: tuple[str, ...] = ()


OPERATIONS: dict[str, Route] = {
    "expand": Route(
        cmd_expand,
        ("padic.from_rational", "padic.valuation", "padic.abs_p", "padic.factorial_valuation", "padic.partial_sums", "padic.series_sum"),
        ("num", "den", "series", "budget"),
    ),
    "arith": Route(cmd_arith, ("padic.PadicNumber.__add__", "padic.PadicNumber.__sub__", "padic.PadicNumber.__mul__", "padic.PadicNumber.__truediv__"), ("op", "x", "y")),
    "inv": Route(cmd_inv, ("padic.inverse",), ("x",)),
    "sqrt": Route(cmd_sqrt, ("padic.hensel_sqrt",), ("x",)),
    "teichmuller": Route(cmd_teichmuller, ("padic.teichmuller",)),
    "squareclass": Route(cmd_squareclass, ("quadext.square_class",), ("x",)),
    "quadext": Route(cmd_quadext, ("quadext.classify_quadratic", "quadext.norm_group", "quadext.norm", "quadext.QuadExtElement.abs_canonical", "quadext.QuadExtElement.abs_normalized"), ("tau", "x", "y")),
    "sgn-tau": Route(cmd_sgn_tau, ("quadext.sgn_tau",), ("tau", "x")),
    "char-eval": Route(cmd_char_eval, ("characters.additive_eval", "characters.fractional_part", "characters.mult_eval", "characters.enumerate_degree", "characters.chi_minus_one"), ("kind", "t", "x", "char")),
    "product-formula": Route(cmd_product_formula, ("padic.product_formula", "characters.product_principle_check"), ("x",)),
    "fourier": Route(cmd_fourier, ("bruhat.fourier", "bruhat.reflect", "bruhat.canonicalize"), ("input", "times", "reflect")),
    "integrate": Route(cmd_integrate, ("bruhat.integrate_additive", "bruhat.integrate_multiplicative", "bruhat.log_abs_integral"), ("input", "measure", "char", "terms")),
    "mellin": Route(cmd_mellin, ("bruhat.mellin_indicator_unit_exact", "bruhat.mellin_indicator_unit"), ("char",)),
    "zeta-local": Route(cmd_zeta_local, ("local_zeta.local_zeta", "local_zeta.functional_equation_check"), ("input", "char")),
    "gauss": Route(cmd_gauss, ("local_zeta.gauss_sum", "local_zeta.vanishing_lemma_check"), ("char",)),
    "epsilon": Route(cmd_epsilon, ("local_zeta.epsilon", "local_zeta.L_factor"), ("char",)),
    "rho": Route(cmd_rho, ("local_zeta.rho_unitary", "local_zeta.rho", "local_zeta.rho_arch", "local_zeta.gamma_R"), ("char", "w", "sigma")),
    "root-number": Route(cmd_root_number, ("local_zeta.root_number",), ("char",)),
    "adele-reduce": Route(cmd_adele_reduce, ("adelic.fundamental_domain_reduce",), ("adele",)),
    "idele-decompose": Route(cmd_idele_decompose, ("adelic.idele_unit_decomposition", "adelic.adelic_abs", "adelic.measure_scaling"), ("adele",)),
    "theta": Route(cmd_theta, ("adelic.theta", "adelic.psi"), ("x",)),
    "zeta-global": Route(cmd_zeta_global, ("adelic.global_L", "adelic.global_epsilon", "adelic.completed_zeta"), ("workers", "global_char")),
    "poisson": Route(cmd_poisson, ("adelic.poisson_check",), ("adele", "level")),
    "ff": Route(cmd_ff, ("finite_field.frobenius", "finite_field.norm", "finite_field.trace", "finite_field.norm_surjectivity_check", "finite_field.rec_q"), ("f", "n", "table", "k")),
}


def _add_flag(sp: argparse.ArgumentParser, name: str) -> None:
    if name == "char":
        sp.add_argument("--angle", help="finite part: angle on the unit generator (on 5 for p = 2)")
        sp.add_argument("--angle-minus", help="p = 2 only: angle at -1 (0 or 1/2)")
        sp.add_argument("--degree", type=int, help="expected degree, checked against the angle")
    elif name == "adele":
        sp.add_argument("--r", help="diagonal rational part")
        sp.add_argument("--override", action="append", help="PRIME:RATIONAL local component (repeatable)")
        sp.add_argument("--real", help="real component")
    elif name == "level":
        sp.add_argument("--level", action="append", help="PRIME:K replaces 1_Z_p by 1_p^K Z_p (repeatable)")
    elif name == "op":
        sp.add_argument("--op", choices=["add", "sub", "mul", "div"], default="add")
    elif name == "kind":
        sp.add_argument("--kind", choices=["additive", "mult"], default="additive")
    elif name == "measure":
        sp.add_argument("--measure", choices=["additive", "multiplicative", "log"], default="additive")
    elif name == "terms":
        sp.add_argument("--terms", type=int, default=60, help="shells for --measure log")
    elif name == "series":
        sp.add_argument("--series", choices=["nfact", "geometric"], help="sum a series instead of expanding")
    elif name == "budget":
        sp.add_argument("--budget", type=int, default=40, help="term budget for --series nfact")
    elif name == "global_char":
        sp.add_argument("--char", action="append", help="PRIME:ANGLE ramified component (repeatable)")
        sp.add_argument("--sigma", type=int)
        sp.add_argument("--w")
    elif name == "times":
        sp.add_argument("--times", type=int, default=1)
    elif name in ("reflect", "table"):
        sp.add_argument(f"--{name}", action="store_true")
    elif name == "workers":
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--prime-bound", dest="prime_bound", type=int)
    elif name in ("sigma", "k"):
        sp.add_argument(f"--{name}", type=int)
    else:
        sp.add_argument(f"--{name}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--prec", type=int)
    common.add_argument("--s", action="append", help="complex 're,im' (repeat for a grid)")
    common.add_argument("--tol", type=float)
    common.add_argument("--json", action="store_true")
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--enum-bound", dest="enum_bound", type=int)
    parser = _Parser(prog="tatelab", description="Exact p-adic, adelic and finite-field computations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, route in OPERATIONS.items():
        sp = sub.add_parser(name, parents=[common])
        for flag in route.flags:
            _add_flag(sp, flag)
    return parser


def dispatch(args: argparse.Namespace) -> ResultDocument:
    route = OPERATIONS[args.command]
    for name in ("angle", "angle_minus", "degree", "prime_bound", "w", "sigma", "workers"):
        if not hasattr(args, name):
            setattr(args, name, None)
    if args.workers is None:
        args.workers = 1
    args.settings = resolve_settings(args)
    out = route.handler(args)
    inputs, result, prov = out[:3]
    bound = out[3] if len(out) > 3 else None
    return ResultDocument(args.command, inputs, result, prov, bound)


def _glue_negatives(argv: list[str]) -> list[str]:
    # argparse reads "-12/35" as an option; bind it to the preceding flag
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and re.match(r"^-[\d.]", tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_negatives(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        command = next((a for a in argv if a in OPERATIONS), None)
        err = {"error": {"command": command, "type": "UsageError", "message": str(exc)}}
        sys.stdout.write(json.dumps(err, sort_keys=True) + "\n")
        return 2
    mode = "json" if args.json else "text"
    try:
        doc = dispatch(args)
    except (UsageError, ValueError, ArithmeticError, KeyError, OSError, TypeError) as exc:
        err = {"error": {"command": args.command, "type": type(exc).__name__, "message": str(exc)}}
        sys.stdout.write(json.dumps(err, sort_keys=True) + "\n")
        return 2 if isinstance(exc, UsageError) else 1
    sys.stdout.write(emit(doc, mode))
    return 0


if __name__ == "__main__":
    sys.exit(main())
