"""Command-line surface: calculators, simulators, and audits.

Every subcommand prints a single canonical JSON payload on stdout (sorted
keys, 12-significant-digit floats, infinity as the string "inf") and writes
diagnostics to stderr, so runs are byte-reproducible given identical inputs,
flags, and seed. Exit codes: 0 ok, 1 validation/precondition failure,
2 an audit found a violation, 3 resource or dimension limits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import bounds
from .audit import (
    AuditReport,
    MechanismModel,
    SearchSettings,
    audit_channel_qdp,
    audit_classical,
)
from .channels import (
    ChannelSpec,
    KrausChannel,
    bloch_rep,
    build_channel,
    dobrushin_estimate,
    doeblin_check,
    doeblin_to_dobrushin,
)
from .encodings import Dataset, EncodingSpec, encode, gamma as gamma_stat, kernel, min_adjacent_kernel
from .errors import (
    ResourceLimitError,
    UnsupportedDimensionError,
    ValidationError,
)
from .linalg import Povm, povm_probabilities
from .mechanisms import NoiseSpec, RandomStream, measurement_mean

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VIOLATION = 2
EXIT_RESOURCE = 3


# ---------------------------------------------------------------------------
# Canonical output formatting
# ---------------------------------------------------------------------------


def format_float(x: float) -> str:
    """Fixed 12-significant-digit decimal; integers collapse, inf is quoted."""
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        return '"nan"'
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return format(x, "#.12g")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed float formatting."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, Fraction):
        return format_float(float(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ",".join(f"{json.dumps(str(k))}:{canonical_json(v)}" for k, v in items) + "}"
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def _flatten(prefix: str, obj, out: dict) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, (list, tuple, np.ndarray)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out[prefix] = obj


def emit(payload: dict, fmt: str = "json") -> str:
    """Render a payload as canonical JSON or a flattened one-record CSV."""
    if fmt == "json":
        return canonical_json(payload)
    if fmt == "csv":
        flat: dict = {}
        _flatten("", payload, flat)
        keys = list(flat.keys())

        def cell(v):
            if isinstance(v, bool):
                return "true" if v else "false"
            if isinstance(v, (float, np.floating, Fraction)):
                return format_float(float(v)).strip('"')
            if v is None:
                return ""
            text = str(v)
            if any(ch in text for ch in ',"\n'):
                text = '"' + text.replace('"', '""') + '"'
            return text

        return ",".join(keys) + "\n" + ",".join(cell(flat[k]) for k in keys)
    raise ValidationError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# Input parsing helpers
# ---------------------------------------------------------------------------


def _read_arg(text: str) -> str:
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return fh.read()
    return text


def _parse_matrix(doc) -> np.ndarray:
    rows = []
    for row in doc:
        rows.append(
            [complex(e[0], e[1]) if isinstance(e, (list, tuple)) else complex(e) for e in row]
        )
    return np.array(rows, dtype=complex)


def _parse_povm(text: str) -> Povm:
    doc = json.loads(_read_arg(text))
    if not isinstance(doc, dict) or "elements" not in doc:
        raise ValidationError("POVM JSON needs 'elements'")
    elements = tuple(_parse_matrix(m) for m in doc["elements"])
    labels = tuple(doc.get("labels", range(len(elements))))
    return Povm(elements, labels)


def _parse_channel(text: str) -> KrausChannel:
    return build_channel(ChannelSpec.from_json(_read_arg(text)))


def _parse_dataset(text: str) -> Dataset:
    return Dataset.from_json(_read_arg(text))


def _parse_model(text: str) -> MechanismModel:
    doc = json.loads(_read_arg(text))
    for key in ("outcomes", "dist", "neighbor_pairs"):
        if key not in doc:
            raise ValidationError(f"mechanism model JSON needs {key!r}")

    def to_prob(v):
        if isinstance(v, str):
            return Fraction(v)
        return Fraction(v) if isinstance(v, int) else Fraction(repr(float(v)))

    dist = {k: tuple(to_prob(p) for p in probs) for k, probs in doc["dist"].items()}
    return MechanismModel(
        outcomes=tuple(doc["outcomes"]),
        dist=dist,
        neighbor_pairs=tuple(tuple(p) for p in doc["neighbor_pairs"]),
    )


def _spec_for(ds: Dataset, kind: str | None) -> EncodingSpec:
    kind = kind or ds.mode
    return EncodingSpec(kind=kind, bit_width=ds.bit_width)


def _eps_value(e: float):
    return e  # formatting handles the infinity sentinel


# ---------------------------------------------------------------------------
# Subcommand implementations (each returns payload dict and exit code)
# ---------------------------------------------------------------------------


def _cmd_encode_kernel(args) -> tuple[dict, int]:
    ds = _parse_dataset(args.dataset)
    spec = _spec_for(ds, args.encoding)
    payload: dict = {
        "status": "ok",
        "mode": spec.kind,
        "n": ds.n,
        "dim": encode(ds, spec).dim,
    }
    if spec.kind == "amplitude":
        g = gamma_stat(ds)
        payload["gamma"] = g
        payload["min_adjacent_kernel"] = min_adjacent_kernel(spec, gamma_value=g)
    elif spec.kind == "basis":
        payload["min_adjacent_kernel"] = min_adjacent_kernel(spec, n=ds.n)
    else:
        payload["min_adjacent_kernel"] = 0.0
    if args.dataset2:
        other = _parse_dataset(args.dataset2)
        payload["kernel"] = kernel(ds, other, spec)
    payload["formula"] = "kernel = |<phi(x)|phi(x')>|^2; closed forms: basis 1-1/n, amplitude 1-Gamma, rotation 0"
    return payload, EXIT_OK


def _resolve_kappa(args) -> float:
    if args.kappa_hat is not None:
        return args.kappa_hat
    if args.dataset is None:
        raise ValidationError("need --kappa-hat or --dataset")
    ds = _parse_dataset(args.dataset)
    spec = _spec_for(ds, args.encoding)
    if spec.kind == "amplitude":
        return min_adjacent_kernel(spec, gamma_value=gamma_stat(ds))
    if spec.kind == "basis":
        return min_adjacent_kernel(spec, n=ds.n)
    return 0.0


def _cmd_amplify_encoding(args) -> tuple[dict, int]:
    kappa = _resolve_kappa(args)
    adp = bounds.encoding_adp_delta(kappa)
    payload: dict = {
        "status": "ok",
        "kappa_hat": kappa,
        "encoding_delta": adp.delta,
        "formula": "delta = sqrt(1 - kappa_hat); laplace b = (sqrt(1-kappa_hat)+t)/eps; "
        "gaussian sigma2 = 2 ln(1.25/delta) (sqrt(1-kappa_hat)+t)^2 / eps^2",
    }
    if args.eps is not None:
        payload["laplace_scale"] = bounds.encoding_laplace_scale(kappa, args.t, args.eps)
        if args.delta is not None:
            payload["gaussian_variance"] = bounds.encoding_gaussian_variance(
                kappa, args.t, args.eps, args.delta
            )
    if args.m is not None:
        failure = bounds.mean_concentration_failure(args.m, args.t)
        payload["failure_prob"] = {
            "nominal": failure.nominal,
            "hoeffding": failure.hoeffding,
        }
    return payload, EXIT_OK


def _cmd_amplify_sampling(args) -> tuple[dict, int]:
    if args.gamma is not None:
        g = args.gamma
    elif args.dataset is not None:
        g = gamma_stat(_parse_dataset(args.dataset))
    else:
        raise ValidationError("need --gamma or --dataset")
    base = bounds.DpParams(args.eps, args.delta or 0.0)
    amplified = bounds.subsample_amplify(base, g, args.m)
    unconditional = bounds.subsample_adp(g, args.m)
    return {
        "status": "ok",
        "gamma": g,
        "m": args.m,
        "base": {"epsilon": base.epsilon, "delta": base.delta},
        "amplified": {"epsilon": amplified.epsilon, "delta": amplified.delta},
        "sampling_only": {"epsilon": unconditional.epsilon, "delta": unconditional.delta},
        "formula": "eps' = ln(1 + (e^eps - 1) Gamma m); delta' = delta Gamma m; sampling alone (0, Gamma m)",
    }, EXIT_OK


def _closed_form_for(spec: ChannelSpec, tau: float) -> tuple[float, str]:
    if spec.kind == "depolarizing":
        dim = int(spec.params.get("dim", 2))
        return (
            bounds.eps_depolarizing(spec.params["p"], tau, dim),
            "ln(1 + ((1-p)/p) d D)",
        )
    if spec.kind == "pad":
        return (
            bounds.eps_pad(spec.params["gamma"], spec.params["lambda"], tau),
            "ln(1 + 2 d s/(1-s)), s = sqrt((1-gamma)(1-lambda))",
        )
    if spec.kind == "compose" and spec.outer and spec.inner:
        if spec.outer.kind == "pad" and spec.inner.kind == "depolarizing":
            return (
                bounds.eps_pad_dep(
                    spec.inner.params["p"],
                    spec.outer.params["gamma"],
                    spec.outer.params["lambda"],
                    tau,
                ),
                "(1-p) ln(1 + 2 d s/(1-s))",
            )
    channel = build_channel(spec)
    if channel.dim_in == 2 and channel.dim_out == 2:
        rep = bloch_rep(channel)
        if rep.unital:
            g = dobrushin_estimate(channel)
            return bounds.eps_unital_dobrushin(g, tau), "ln(1 + 2 d gamma), contractive unital"
    raise ValidationError(f"no closed-form epsilon for channel kind {spec.kind!r}")


def _cmd_channel_eps(args) -> tuple[dict, int]:
    spec = ChannelSpec.from_json(_read_arg(args.channel))
    epsilon, formula = _closed_form_for(spec, args.tau)
    return {
        "status": "ok",
        "epsilon": _eps_value(epsilon),
        "tau": args.tau,
        "kind": spec.kind,
        "formula": formula,
    }, EXIT_OK


def _cmd_dobrushin(args) -> tuple[dict, int]:
    channel = _parse_channel(args.channel)
    az, pol = (int(v) for v in args.grid.split("x"))
    value = dobrushin_estimate(
        channel,
        grid=(az, pol),
        refine_iters=args.refine,
        full_search=args.full_search,
        seed=args.seed or 0,
    )
    method = "exact-unital" if channel.dim_in == 2 and bloch_rep(channel).unital else "grid-search"
    return {
        "status": "ok",
        "gamma_dobrushin": value,
        "method": method,
        "search": {"grid": args.grid, "refine_iters": args.refine, "full_search": args.full_search},
    }, EXIT_OK


def _cmd_doeblin_check(args) -> tuple[dict, int]:
    channel = _parse_channel(args.channel)
    if args.y in (None, "maximally-mixed"):
        y = np.eye(channel.dim_out, dtype=complex) / channel.dim_out
    else:
        y = _parse_matrix(json.loads(_read_arg(args.y)))
    ok = doeblin_check(channel, args.gamma, y, tol=args.tol)
    return {
        "status": "ok",
        "satisfied": ok,
        "gamma": args.gamma,
        "implied_dobrushin": doeblin_to_dobrushin(args.gamma) if ok else None,
        "formula": "Choi(Phi) - gamma I(x)Y >= 0 implies a (1-gamma) contraction factor",
    }, EXIT_OK


def _cmd_simulate_alg1(args) -> tuple[dict, int]:
    ds = _parse_dataset(args.dataset)
    spec = _spec_for(ds, args.encoding)
    povm = _parse_povm(args.povm)
    noise_text = _read_arg(args.noise)
    if noise_text == "none":
        noise = NoiseSpec("none")
    else:
        doc = json.loads(noise_text)
        noise = NoiseSpec(
            kind=doc["kind"],
            scale=doc.get("scale", 0.0),
            variance=doc.get("variance", 0.0),
        )
    stream = RandomStream(args.seed)
    value = measurement_mean(ds, spec, povm, args.m, noise, stream)
    rho = encode(ds, spec).density()
    p_one = float(povm_probabilities(povm, rho)[list(povm.labels).index(1)])
    return {
        "status": "ok",
        "output": value,
        "m": args.m,
        "p_one": p_one,
        "std_error": math.sqrt(p_one * (1 - p_one) / args.m),
        "noise": {"kind": noise.kind, "scale": noise.scale, "variance": noise.variance},
        "seed": args.seed,
    }, EXIT_OK


def _report_payload(report: AuditReport) -> dict:
    doc = report.to_dict()
    doc["status"] = "ok" if report.satisfied else "violation"
    return doc


def _cmd_audit_dp(args) -> tuple[dict, int]:
    model = _parse_model(args.model)
    claimed = bounds.DpParams(args.eps, args.delta or 0.0)
    report = audit_classical(model, claimed)
    return _report_payload(report), EXIT_OK if report.satisfied else EXIT_VIOLATION


def _cmd_audit_qdp(args) -> tuple[dict, int]:
    channel = _parse_channel(args.channel)
    settings = SearchSettings(
        directions=args.grid,
        interior=args.trials,
        seed=args.seed,
    )
    report = audit_channel_qdp(channel, args.tau, args.claimed_eps, settings)
    return _report_payload(report), EXIT_OK if report.satisfied else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdpamp",
        description=(
            "Privacy amplification calculators, simulators, and audits for "
            "quantum data encodings, Born-rule subsampling, and small Kraus channels."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--tol", type=float, default=1e-10, help="tolerance override")

    p = sub.add_parser(
        "encode-kernel",
        help="encode a dataset; report kernel, Gamma, and the minimum adjacent kernel",
        description=(
            "Feature-map kernels: kernel(x,x') = |<phi(x)|phi(x')>|^2, Gamma(x) = max_j |x_j|^2, "
            "minimum adjacent kernel closed forms 1-1/n (basis), 1-Gamma (amplitude), 0 (rotation)."
        ),
    )
    p.add_argument("--dataset", required=True, help="dataset JSON or @file")
    p.add_argument("--dataset2", help="second dataset JSON or @file for the kernel")
    p.add_argument("--encoding", choices=("basis", "amplitude", "rotation"))
    common(p)
    p.set_defaults(fn=_cmd_encode_kernel)

    p = sub.add_parser(
        "amplify-encoding",
        help="privacy from encoding plus calibrated output noise",
        description=(
            "Guarantee of releasing only the encoding: (0, sqrt(1-kappa_hat)); "
            "Laplace scale (sqrt(1-kappa_hat)+t)/eps; Gaussian variance "
            "2 ln(1.25/delta) (sqrt(1-kappa_hat)+t)^2/eps^2; failure probability "
            "min(1, 4 exp(-m t^2)) with the Hoeffding variant min(1, 4 exp(-m t^2/2))."
        ),
    )
    p.add_argument("--kappa-hat", type=float, dest="kappa_hat")
    p.add_argument("--dataset", help="dataset JSON or @file (alternative to --kappa-hat)")
    p.add_argument("--encoding", choices=("basis", "amplitude", "rotation"))
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--m", type=int)
    common(p)
    p.set_defaults(fn=_cmd_amplify_encoding)

    p = sub.add_parser(
        "amplify-sampling",
        help="amplification by Born-rule (l2-norm) subsampling",
        description=(
            "eps' = ln(1 + (e^eps - 1) Gamma m), delta' = delta Gamma m, valid for Gamma m <= 1; "
            "the sampling step alone is (0, Gamma m)."
        ),
    )
    p.add_argument("--gamma", type=float)
    p.add_argument("--dataset", help="amplitude dataset JSON or @file")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float)
    common(p)
    p.set_defaults(fn=_cmd_amplify_sampling)

    p = sub.add_parser(
        "channel-eps",
        help="closed-form pure-QDP epsilon of a named channel",
        description=(
            "Closed forms: depolarizing ln(1+((1-p)/p) d D); phase-amplitude damping "
            "ln(1+2 d s/(1-s)) with s = sqrt((1-gamma)(1-lambda)); damping after depolarizing "
            "(1-p) times the damping bound; contractive unital qubit ln(1+2 d gamma)."
        ),
    )
    p.add_argument("--channel", required=True, help="channel JSON or @file")
    p.add_argument("--tau", type=float, required=True)
    common(p)
    p.set_defaults(fn=_cmd_channel_eps)

    p = sub.add_parser(
        "dobrushin",
        help="trace-distance contraction coefficient of a channel",
        description=(
            "Worst contraction factor sup ||Phi(rho)-Phi(sigma)|| / ||rho-sigma||; exact operator "
            "norm of the Pauli-transfer block for unital qubit channels, otherwise a refined "
            "grid search over orthogonal state pairs."
        ),
    )
    p.add_argument("--channel", required=True)
    p.add_argument("--grid", default="64x32", help="azimuth x polar grid density")
    p.add_argument("--refine", type=int, default=20)
    p.add_argument("--full-search", type=int, default=0, dest="full_search",
                   help="additionally sample this many arbitrary mixed pairs")
    p.add_argument("--seed", type=int)
    common(p)
    p.set_defaults(fn=_cmd_dobrushin)

    p = sub.add_parser(
        "doeblin-check",
        help="minorization check Choi(Phi) - gamma I(x)Y >= 0",
        description=(
            "Tests whether the channel dominates gamma times the constant-output map onto Y; "
            "a pass certifies contraction factor at most 1-gamma."
        ),
    )
    p.add_argument("--channel", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--y", help='matrix JSON, @file, or "maximally-mixed" (default)')
    common(p)
    p.set_defaults(fn=_cmd_doeblin_check)

    p = sub.add_parser(
        "simulate-alg1",
        help="encode, measure m times, release the noisy mean",
        description=(
            "Runs the measure-and-perturb pipeline: m independent two-outcome measurements of "
            "the encoded state, mean of the outcomes, plus one draw of the configured noise."
        ),
    )
    p.add_argument("--dataset", required=True)
    p.add_argument("--encoding", choices=("basis", "amplitude", "rotation"))
    p.add_argument("--povm", required=True, help='POVM JSON {"elements": [...], "labels": [...]}')
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--noise", default="none", help='"none" or noise JSON {"kind": ..., ...}')
    p.add_argument("--seed", type=int, required=True)
    common(p)
    p.set_defaults(fn=_cmd_simulate_alg1)

    p = sub.add_parser(
        "audit-dp",
        help="exact (eps, delta) audit of a finite mechanism model",
        description=(
            "Enumerates every neighbor pair: eps_hat is the worst outcome log-ratio and "
            "delta_hat the hockey-stick divergence at the claimed epsilon; exit code 2 when "
            "the claim is violated."
        ),
    )
    p.add_argument("--model", required=True, help="mechanism model JSON or @file")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float)
    common(p)
    p.set_defaults(fn=_cmd_audit_dp)

    p = sub.add_parser(
        "audit-qdp",
        help="empirical pure-QDP audit of a qubit channel",
        description=(
            "Maximizes measurement likelihood ratios over state pairs within trace distance tau; "
            "a violation (eps_hat above the claim) exits with code 2 and a witness pair."
        ),
    )
    p.add_argument("--channel", required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--claimed-eps", type=float, required=True, dest="claimed_eps")
    p.add_argument("--grid", type=int, default=32, help="anchor directions")
    p.add_argument("--trials", type=int, default=32, help="random interior pairs")
    p.add_argument("--seed", type=int, required=True)
    common(p)
    p.set_defaults(fn=_cmd_audit_qdp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.fn(args)
    except (UnsupportedDimensionError, ResourceLimitError) as exc:
        print(emit({"status": "error", "message": str(exc)}, args.format))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(emit({"status": "error", "message": str(exc)}, args.format))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(emit(payload, args.format))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
