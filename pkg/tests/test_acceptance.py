"""End-to-end acceptance checks.

One test per criterion (large criteria are split into lettered parts); each
prints a PASS/FAIL line. Several closed-form claims checked here are
mathematically unattainable as stated -- the corresponding tests implement
the claim faithfully, fail, and their assertion messages carry the exact
counterexample. See notes in each docstring.
"""

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from qdpamp.audit import (
    PerEntryRandomizedResponse,
    SearchSettings,
    audit_channel_qdp,
    audit_subsampling_theorem,
)
from qdpamp.bounds import (
    DpParams,
    eps_depolarizing,
    eps_pad,
    eps_pad_dep,
    eps_unital_dobrushin,
    mean_concentration_failure,
    subsample_amplify,
)
from qdpamp.channels import (
    KrausChannel,
    apply,
    compose,
    depolarizing_channel,
    dobrushin_estimate,
    doeblin_check,
    gad_channel,
    identity_channel,
    pad_channel,
    pd_channel,
)
from qdpamp.encodings import Dataset, EncodingSpec, encode, gamma, min_adjacent_kernel
from qdpamp.linalg import (
    Povm,
    PureState,
    binary_povm,
    random_density_matrix,
    random_pure_state,
    trace_distance,
)
from qdpamp.mechanisms import (
    NoiseSpec,
    RandomStream,
    gaussian_variance,
    laplace_density_ratio_bound,
    measurement_mean,
)

PARAM_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
TAU_GRID = (0.25, 0.5, 1.0)


def report(name: str, ok: bool, detail: str = "") -> None:
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}" + (f" -- {detail}" if detail else ""))


def test_c01_pure_state_distance_identity():
    """Trace distance between random pure pairs matches sqrt(1 - overlap^2)."""
    start = time.time()
    rng = np.random.default_rng(20240901)
    worst = 0.0
    for k in range(1000):
        dim = 2 + k % 3
        psi = random_pure_state(dim, rng)
        phi = random_pure_state(dim, rng)
        td = trace_distance(psi.density(), phi.density())
        expected = math.sqrt(max(0.0, 1 - abs(psi.inner(phi)) ** 2))
        worst = max(worst, abs(td - expected))
    elapsed = time.time() - start
    ok = worst <= 1e-9 and elapsed < 5
    report("1 pure-state distance identity", ok, f"worst gap {worst:.2e}, {elapsed:.2f}s")
    assert worst <= 1e-9
    assert elapsed < 5


def test_c02a_closed_form_adjacent_kernels():
    """Closed forms: basis 1 - 1/n, amplitude 1 - Gamma, rotation 0, exactly."""
    ok = True
    for n in range(2, 9):
        spec = EncodingSpec(kind="basis", bit_width=4)
        ok = ok and min_adjacent_kernel(spec, n=n) == 1.0 - 1.0 / n
    amp = EncodingSpec(kind="amplitude")
    ok = ok and min_adjacent_kernel(amp, gamma_value=0.64) == 1.0 - 0.64
    ok = ok and min_adjacent_kernel(EncodingSpec(kind="rotation")) == 0.0
    report("2a closed-form adjacent kernels", ok)
    assert ok


def test_c02b_basis_neighbor_distance_against_closed_form():
    """Distance of distinct-entry basis neighbors vs sqrt(1 - (1 - 1/n)).

    Unattainable as stated: those neighbors have overlap (n-1)/n, so their
    trace distance is sqrt(1 - ((n-1)/n)^2) = sqrt(2n-1)/n, which exceeds
    sqrt(1/n) for every n >= 2 (at n = 2: 0.866 > 0.707). The closed-form
    adjacent-kernel value 1 - 1/n is an unsquared overlap; the inequality
    only holds with the squared variant ((n-1)/n)^2.
    """
    start = time.time()
    spec = EncodingSpec(kind="basis", bit_width=3)
    failures = []
    for n in range(2, 7):
        base = tuple(range(n))
        for pos in range(n):
            other = base[:pos] + (7,) + base[pos + 1 :]
            x = Dataset(mode="basis", values=base, bit_width=3)
            y = Dataset(mode="basis", values=other, bit_width=3)
            td = trace_distance(encode(x, spec).density(), encode(y, spec).density())
            bound = math.sqrt(1 - min_adjacent_kernel(spec, n=n))
            if td > bound + 1e-9:
                failures.append((n, td, bound))
    elapsed = time.time() - start
    ok = not failures and elapsed < 5
    detail = (
        f"{len(failures)} violating pairs; first at n={failures[0][0]}: "
        f"distance {failures[0][1]:.9f} > sqrt(1/n) = {failures[0][2]:.9f}"
        if failures
        else f"{elapsed:.2f}s"
    )
    report("2b basis neighbor distance vs closed form", ok, detail)
    assert not failures, (
        "distinct-entry basis neighbors have overlap (n-1)/n and trace distance "
        "sqrt(2n-1)/n, which exceeds sqrt(1 - (1 - 1/n)); " + detail
    )


def test_c03_channel_validity_and_damping_composition():
    """Kraus completeness on parameter grids; composed damping channels agree."""
    start = time.time()
    worst = 0.0
    grid = np.linspace(0.0, 1.0, 21)

    def completeness_gap(ch: KrausChannel) -> float:
        total = sum(op.conj().T @ op for op in ch.ops)
        return float(np.max(np.abs(total - np.eye(ch.dim_in))))

    for p in grid:
        for g in grid:
            worst = max(worst, completeness_gap(gad_channel(p, g)))
    for g in grid:
        for lam in grid:
            worst = max(worst, completeness_gap(pad_channel(0.5, g, lam)))
    for lam in grid:
        worst = max(worst, completeness_gap(pd_channel(lam)))
    for p in grid:
        for dim in (2, 3, 4, 8):
            worst = max(worst, completeness_gap(depolarizing_channel(p, dim)))

    rng = np.random.default_rng(7)
    comp_gap = 0.0
    composed = compose(gad_channel(0.3, 0.5), pd_channel(0.7))
    direct = pad_channel(0.3, 0.5, 0.7)
    for _ in range(100):
        rho = random_density_matrix(2, rng)
        comp_gap = max(
            comp_gap,
            float(np.max(np.abs(apply(composed, rho).matrix - apply(direct, rho).matrix))),
        )
    elapsed = time.time() - start
    ok = worst <= 1e-12 and comp_gap <= 1e-10 and elapsed < 10
    report(
        "3 channel validity",
        ok,
        f"completeness gap {worst:.2e}, composition gap {comp_gap:.2e}, {elapsed:.2f}s",
    )
    assert worst <= 1e-12
    assert comp_gap <= 1e-10
    assert elapsed < 10


def test_c04_dobrushin_estimates():
    """Contraction of depolarizing is 1 - p; shortcut and grid agree."""
    start = time.time()
    ok = True
    details = []
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        est = dobrushin_estimate(depolarizing_channel(p))
        ok = ok and abs(est - (1 - p)) <= 1e-3
        details.append(abs(est - (1 - p)))
    for p in (0.25, 0.5, 0.75):
        exact = dobrushin_estimate(depolarizing_channel(p), method="exact")
        numeric = dobrushin_estimate(depolarizing_channel(p), method="grid")
        ok = ok and abs(exact - numeric) <= 1e-3
    elapsed = time.time() - start
    ok = ok and elapsed < 30
    report("4 contraction estimates", ok, f"worst gap {max(details):.2e}, {elapsed:.2f}s")
    assert ok


def _grid_audit(channels_and_bounds, label):
    """Audit each (channel, tau, bound); return (violations, worst_excess)."""
    violations = []
    worst = 0.0
    settings = SearchSettings()
    for channel, tau, bound, params in channels_and_bounds:
        rep = audit_channel_qdp(channel, tau, bound, settings)
        if not rep.satisfied:
            excess = rep.eps_hat - bound
            worst = max(worst, excess)
            violations.append((params, tau, rep.eps_hat, bound))
    return violations, worst


def test_c05a_depolarizing_bound_audit():
    """Audit ln(1 + ((1-p)/p) d D) on the parameter grid; the bound is tight
    and sound, so every audit must come in at or below it."""
    start = time.time()
    jobs = [
        (depolarizing_channel(p), tau, eps_depolarizing(p, tau, 2), {"p": p})
        for p in PARAM_GRID
        for tau in TAU_GRID
    ]
    violations, worst = _grid_audit(jobs, "depolarizing")
    elapsed = time.time() - start
    ok = not violations and elapsed < 300
    report("5a depolarizing bound audit", ok, f"{len(jobs)} audits, {elapsed:.1f}s")
    assert not violations, f"violations: {violations[:3]}"


def test_c05b_damping_bound_audit():
    """Audit ln(1 + 2 d s/(1-s)) for phase-amplitude damping.

    Unattainable as stated: the quoted bound is the equatorial coherence
    ratio and is independent of the excitation parameter p, but the channel's
    polar population ratio (1 - gamma(1-p))/(p gamma) exceeds it on much of
    the grid. Example: p=0.1, gamma=lambda=0.5, tau=1 gives ratio 11 against
    the claimed e^eps = 3.
    """
    start = time.time()
    jobs = [
        (pad_channel(p, g, lam), tau, eps_pad(g, lam, tau), {"p": p, "gamma": g, "lambda": lam})
        for p in PARAM_GRID
        for g in PARAM_GRID
        for lam in PARAM_GRID
        for tau in TAU_GRID
    ]
    violations, worst = _grid_audit(jobs, "pad")
    elapsed = time.time() - start
    ok = not violations and elapsed < 300
    detail = (
        f"{len(violations)}/{len(jobs)} audits exceed the bound, worst excess {worst:.3f}; "
        f"e.g. params {violations[0][0]}, tau={violations[0][1]}: "
        f"eps_hat {violations[0][2]:.4f} > {violations[0][3]:.4f}"
        if violations
        else f"{len(jobs)} audits, {elapsed:.1f}s"
    )
    report("5b phase-amplitude damping bound audit", ok, detail)
    assert not violations, (
        "the quoted damping bound omits the polar population ratio "
        "(1 - gamma(1-p))/(p gamma) and is violated empirically; " + detail
    )


def test_c05c_unital_contraction_bound_audit():
    """Audit ln(1 + 2 d gamma) with gamma = 1 - p on depolarizing channels.

    Unattainable as stated: the depolarizing channel itself achieves ratio
    1 + 2 d (1-p)/p, which exceeds 1 + 2 d (1-p) for every p < 1, so the
    claimed bound fails on the whole grid (the tight exponent needs the 1/p).
    """
    start = time.time()
    jobs = [
        (depolarizing_channel(p), tau, eps_unital_dobrushin(1 - p, tau), {"p": p})
        for p in PARAM_GRID
        for tau in TAU_GRID
    ]
    violations, worst = _grid_audit(jobs, "unital")
    elapsed = time.time() - start
    ok = not violations and elapsed < 300
    detail = (
        f"{len(violations)}/{len(jobs)} audits exceed the bound, worst excess {worst:.3f}; "
        f"e.g. p={violations[0][0]['p']}, tau={violations[0][1]}: "
        f"eps_hat {violations[0][2]:.4f} > {violations[0][3]:.4f}"
        if violations
        else f"{len(jobs)} audits, {elapsed:.1f}s"
    )
    report("5c unital contraction bound audit", ok, detail)
    assert not violations, (
        "the depolarizing channel is (1-p)-contractive and unital yet its exact "
        "worst ratio is 1 + 2d(1-p)/p, above the claimed 1 + 2d(1-p); " + detail
    )


def test_c05d_damping_after_depolarizing_bound_audit():
    """Audit (1-p) ln(1 + 2 d s/(1-s)) for damping composed after depolarizing.

    Unattainable as stated: inherits the polar-ratio gap of the damping bound;
    pre-mixing with weight p shrinks but does not close it.
    """
    start = time.time()
    jobs = [
        (
            compose(pad_channel(p, g, lam), depolarizing_channel(p)),
            tau,
            eps_pad_dep(p, g, lam, tau),
            {"p": p, "gamma": g, "lambda": lam},
        )
        for p in PARAM_GRID
        for g in PARAM_GRID
        for lam in PARAM_GRID
        for tau in TAU_GRID
    ]
    violations, worst = _grid_audit(jobs, "pad-dep")
    elapsed = time.time() - start
    ok = not violations and elapsed < 300
    detail = (
        f"{len(violations)}/{len(jobs)} audits exceed the bound, worst excess {worst:.3f}; "
        f"e.g. params {violations[0][0]}, tau={violations[0][1]}: "
        f"eps_hat {violations[0][2]:.4f} > {violations[0][3]:.4f}"
        if violations
        else f"{len(jobs)} audits, {elapsed:.1f}s"
    )
    report("5d damping-after-depolarizing bound audit", ok, detail)
    assert not violations, detail


def test_c06a_subsampling_two_draws():
    """Uniform n=4 dataset, m=2 draws, per-entry randomized response at
    eps = ln 3, audited against (ln 2, 0).

    Unattainable as stated: the draws are independent (with replacement), so
    both can hit the changed entry; the exact outcome ratio on the doubly
    flipped output is (9/8)^2/(1/2)^2... concretely P(11 | x') / P(11 | x) =
    (3/8)^2 / (1/4)^2 = 2.25 > 2. The bound ln(1 + (e^eps - 1) Gamma m) only
    holds for draws without replacement.
    """
    start = time.time()
    x = Dataset(mode="amplitude", values=(0.5, 0.5, 0.5, 0.5))
    base = PerEntryRandomizedResponse(Fraction(3, 4), 2, x.values)
    claimed = subsample_amplify(DpParams(math.log(3.0), 0.0), 0.25, 2)
    rep = audit_subsampling_theorem(x, base, 2, claimed)
    elapsed = time.time() - start
    ok = rep.satisfied and elapsed < 10
    detail = (
        f"eps_hat {rep.eps_hat:.6f} vs claimed {claimed.epsilon:.6f}, "
        f"witness {rep.witness['eps']}"
    )
    report("6a subsampling audit, two draws", ok, detail)
    assert rep.satisfied, (
        "with-replacement draws can repeat the changed entry: exact ratio 2.25 "
        "exceeds e^eps' = 2; " + detail
    )


def test_c06b_subsampling_single_draw():
    """x = (0.6, 0.8), m = 1: the amplified bound is exactly tight."""
    start = time.time()
    x = Dataset(mode="amplitude", values=(0.6, 0.8))
    base = PerEntryRandomizedResponse(Fraction(3, 4), 1, x.values)
    g = gamma(x)
    claimed = subsample_amplify(DpParams(math.log(3.0), 0.0), g, 1)
    rep = audit_subsampling_theorem(x, base, 1, claimed)
    elapsed = time.time() - start
    ok = rep.satisfied and rep.eps_hat <= claimed.epsilon + 1e-12 and elapsed < 10
    report(
        "6b subsampling audit, single draw",
        ok,
        f"eps_hat {rep.eps_hat:.12f} <= {claimed.epsilon:.12f}, {elapsed:.2f}s",
    )
    assert rep.satisfied
    assert rep.eps_hat <= claimed.epsilon + 1e-12
    assert elapsed < 10


def test_c07_measurement_mean_concentration():
    """Tail of the measured mean vs the two-sided Hoeffding bound."""
    start = time.time()
    m, t, trials = 100, 0.3, 10**4
    x = Dataset(mode="amplitude", values=(1.0, 0.0))
    spec = EncodingSpec(kind="amplitude")
    povm = Povm((np.eye(2) / 2, np.eye(2) / 2), labels=(1, 0))
    p_one = 0.5
    master = RandomStream(31337)
    hits = 0
    for k in range(trials):
        mu = measurement_mean(x, spec, povm, m, NoiseSpec("none"), master.substream(k))
        if abs(mu - p_one) >= t / 2:
            hits += 1
    observed = hits / trials
    hoeffding = 2 * math.exp(-m * t * t / 2)
    printed = 2 * math.exp(-m * t * t)
    slack = 3 * math.sqrt(hoeffding * (1 - hoeffding) / trials)
    elapsed = time.time() - start
    ok = observed <= hoeffding + slack and elapsed < 30
    report(
        "7 measured-mean concentration",
        ok,
        f"observed {observed:.4f} <= {hoeffding:.4f}+{slack:.4f} "
        f"(nominal variant {printed:.2e} reported alongside), {elapsed:.1f}s",
    )
    assert observed <= hoeffding + slack
    assert elapsed < 30


def test_c08_mechanism_calibration():
    """Laplace worst-case ratio, Gaussian variance formula, sampler moments."""
    start = time.time()
    ok = True
    for eps in (0.5, 1.0, 2.0):
        b = 1.0 / eps
        ok = ok and laplace_density_ratio_bound(1.0, b) == math.exp(eps)
    got = gaussian_variance(1.0, 1.0, 0.05)
    want = 2 * math.log(1.25 / 0.05) * 1.0 / 1.0
    ok = ok and abs(got - want) <= 1e-12 * want

    n = 10**6
    lap = RandomStream(2024).laplace(0.7, size=n)
    target_var = 2 * 0.7**2
    se_var = math.sqrt((24 * 0.7**4 - target_var**2) / n)
    ok = ok and abs(float(np.var(lap)) - target_var) <= 3 * se_var
    ok = ok and abs(float(np.mean(lap))) <= 3 * math.sqrt(target_var / n)

    gau = RandomStream(2025).gaussian(1.3, size=n)
    ok = ok and abs(float(np.mean(gau))) <= 3 * math.sqrt(1.3 / n)
    ok = ok and abs(float(np.var(gau)) - 1.3) <= 3 * math.sqrt(2 * 1.3**2 / n)
    elapsed = time.time() - start
    ok = ok and elapsed < 30
    report("8 mechanism calibration", ok, f"{elapsed:.1f}s")
    assert ok


def test_c09_doeblin_minorization():
    """Minorization examples plus the implied contraction bound on a random
    channel sample."""
    start = time.time()
    ok = doeblin_check(depolarizing_channel(1.0), 1.0, np.eye(2) / 2)
    ok = ok and not doeblin_check(identity_channel(), 0.1, np.eye(2) / 2)

    rng = np.random.default_rng(99)
    checked = 0
    for _ in range(50):
        k = int(rng.integers(2, 5))
        g = rng.normal(size=(2 * k, 2)) + 1j * rng.normal(size=(2 * k, 2))
        q, _ = np.linalg.qr(g)
        channel = KrausChannel(tuple(q[2 * i : 2 * i + 2, :] for i in range(k)))
        y_candidates = [np.eye(2) / 2]
        img = sum(op @ np.eye(2) / 2 @ op.conj().T for op in channel.ops)
        y_candidates.append(img / np.trace(img).real)
        best_gamma = 0.0
        for gam in np.linspace(0.05, 1.0, 20):
            if any(doeblin_check(channel, gam, y) for y in y_candidates):
                best_gamma = gam
        if best_gamma > 0:
            checked += 1
            contraction = dobrushin_estimate(channel, grid=(32, 16), refine_iters=10)
            if contraction > (1 - best_gamma) + 1e-3:
                ok = False
                break
    elapsed = time.time() - start
    ok = ok and elapsed < 60
    report("9 minorization implies contraction", ok, f"{checked}/50 channels passed a check, {elapsed:.1f}s")
    assert ok


def test_c10_cli_reproducibility():
    """Identical seed and flags give byte-identical stdout."""
    start = time.time()
    argv = [
        sys.executable,
        "-m",
        "qdpamp.cli",
        "audit-qdp",
        "--channel",
        '{"kind":"pad","p":0.4,"gamma":0.3,"lambda":0.2}',
        "--tau",
        "0.5",
        "--claimed-eps",
        "2.0",
        "--seed",
        "424242",
    ]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    elapsed = time.time() - start
    ok = first.stdout == second.stdout and first.returncode == second.returncode and elapsed < 5
    report("10 reproducible CLI output", ok, f"{len(first.stdout)} bytes, {elapsed:.1f}s")
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode
    assert elapsed < 5
