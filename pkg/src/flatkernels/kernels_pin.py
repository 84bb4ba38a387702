"""Kernels on non-orientable flat quotients, plus descent and obstruction probes.

Each kernel ships in two forms:

* `orbit` (canonical): a method-of-images sum over the identification group
  applied to the source point.  Every summand is an exact translate or
  reflection-in-y of the Euclidean fundamental solution, so monogenicity or
  harmonicity in x and the descent relations are testable term by term.  This
  is the form the boundary-integral engine consumes.
* `paper_literal`: sign flips applied to the coordinate differences
  themselves inside the periodized kernel.
  Since sign flips inside Euclidean norms are no-ops, the scalar literal
  sums collapse onto oriented-cylinder kernels (asserted by tests); the
  vector literal sum averages components away and generally fails the Dirac
  residual check.  It is retained for the discrepancy probes.

Class A (projective) reflections act on the coordinate block k..p-1; the
bundle twist is rho(A) = +1 for the trivial bundle and (-1)^|A| when the
fiber is negated.  Class B uses the twisted translations of the Moebius
strip (sign of the translation flips the last coordinate) and the folded
k-th axis of the Klein quotient; only the trivial pin bundle is constructed
there, and only the SumParity sign variant defines a character (AllEven is
reachable with `allow_noncharacter=True` for the probe pathway).
"""

from __future__ import annotations

import numpy as np

from .calculus import FDScheme, dirac_fd
from .clifford import MultiVector, reflect_coords
from .errors import RegimeError, SingularPoint
from .kernels_euclid import cauchy_g_batch, sphere_area
from .kernels_periodic import (
    KernelEval,
    _chunks,
    _guard_singular,
    _pair_batch,
    _shell_geometry,
    cauchy_reg_tail,
    cauchy_tail,
    cyl_cauchy_diff,
    cyl_cauchy_reg_diff,
    cyl_green_diff,
    cyl_green_reg_diff,
    green_reg_tail,
    green_tail,
    kahan_shell_sum,
)
from .lattice import BundleCharacter, ManifoldSpec, _shell_array, char_sign, moebius_sgn


# -- regime dispatch over the oriented-cylinder kernels ------------------------

def periodic_cauchy_diff(L, char, D, R):
    if L.k <= L.n - 2:
        return cyl_cauchy_diff(L, char, D, R)
    if L.k == L.n - 1:
        return cyl_cauchy_reg_diff(L, char, D, R)
    raise RegimeError("vector kernel needs k <= n-1; use torus_cauchy_two_point at k = n")


def periodic_cauchy_tail(L, R, sep):
    return cauchy_tail(L, R, sep) if L.k <= L.n - 2 else cauchy_reg_tail(L, R, sep)


def periodic_green_diff(L, char, D, R):
    if L.k <= L.n - 3:
        return cyl_green_diff(L, char, D, R)
    if L.k == L.n - 2:
        return cyl_green_reg_diff(L, char, D, R)
    raise RegimeError("scalar kernel needs k <= n-2")


def periodic_green_tail(L, R, sep, char=None):
    if L.k <= L.n - 3:
        return green_tail(L, R, sep)
    return green_reg_tail(L, R, sep, char or BundleCharacter(0))


# -- Class A: projective cylinders and real projective space -------------------

def _reflection_subsets(axes: list[int]) -> list[tuple[int, ...]]:
    """All subsets of the reflected block, enumerated by ascending bitmask."""
    out = []
    q = len(axes)
    for bits in range(1 << q):
        out.append(tuple(axes[i] for i in range(q) if bits >> i & 1))
    return out


def _twist(M: ManifoldSpec, subset: tuple[int, ...]) -> float:
    return (-1.0) ** len(subset) if M.bundle.negate_fiber else 1.0


def _flip_columns(D: np.ndarray, subset) -> np.ndarray:
    out = D.copy()
    for j in subset:
        out[:, j] = -out[:, j]
    return out


def proj_cauchy_batch(M: ManifoldSpec, X, y, R: int, form: str = "orbit"):
    """Batched projective Cauchy kernel: (values (B, n), tail_bounds (B,))."""
    _check_form(form)
    if M.kind not in ("Projective", "Cylinder", "Torus"):
        raise RegimeError(f"proj_cauchy expects a projective or oriented spec, got {M.kind}")
    L, char = M.lattice, M.bundle
    D, _ = _pair_batch(X, y, M.n)
    axes = M.reflection_axes()
    vals = np.zeros((D.shape[0], M.n))
    tails = np.zeros(D.shape[0])
    Xa = np.asarray(X, dtype=float).reshape(-1, M.n)
    yv = np.atleast_2d(np.asarray(y, dtype=float))
    for subset in _reflection_subsets(axes):
        rho = _twist(M, subset)
        if form == "orbit":
            # reflect the source point: the difference becomes x_j + y_j on the subset
            DA = D.copy()
            for j in subset:
                DA[:, j] = Xa[:, j] + yv[:, j]
        else:
            DA = _flip_columns(D, subset)
        vals += rho * periodic_cauchy_diff(L, char, DA, R)
        tails += periodic_cauchy_tail(L, R, np.linalg.norm(DA, axis=1))
    return vals, tails


def proj_cauchy(M: ManifoldSpec, x, y, R: int, form: str = "orbit") -> KernelEval:
    """Cauchy kernel on a projective cylinder (finite superposition of 2^(p-k))."""
    vals, tails = proj_cauchy_batch(M, np.atleast_2d(np.asarray(x, float)), y, R, form)
    return KernelEval(MultiVector.from_vector(vals[0]), R, float(tails[0]))


def proj_green_batch(M: ManifoldSpec, X, y, R: int, form: str = "orbit"):
    """Batched projective Green kernel: (values (B,), tail_bounds (B,))."""
    _check_form(form)
    if M.kind not in ("Projective", "Cylinder", "Torus"):
        raise RegimeError(f"proj_green expects a projective or oriented spec, got {M.kind}")
    L, char = M.lattice, M.bundle
    D, _ = _pair_batch(X, y, M.n)
    axes = M.reflection_axes()
    vals = np.zeros(D.shape[0])
    tails = np.zeros(D.shape[0])
    Xa = np.asarray(X, dtype=float).reshape(-1, M.n)
    yv = np.atleast_2d(np.asarray(y, dtype=float))
    for subset in _reflection_subsets(axes):
        rho = _twist(M, subset)
        if form == "orbit":
            DA = D.copy()
            for j in subset:
                DA[:, j] = Xa[:, j] + yv[:, j]
        else:
            DA = _flip_columns(D, subset)
        vals += rho * periodic_green_diff(L, char, DA, R)
        tails += periodic_green_tail(L, R, np.linalg.norm(DA, axis=1), char)
    return vals, tails


def proj_green(M: ManifoldSpec, x, y, R: int, form: str = "orbit") -> KernelEval:
    vals, tails = proj_green_batch(M, np.atleast_2d(np.asarray(x, float)), y, R, form)
    return KernelEval(MultiVector.scalar(M.n, float(vals[0])), R, float(tails[0]))


def realproj_cauchy_batch(p: int, X, y, form: str = "orbit", negate_fiber: bool = False):
    """k = 0 specialisation: finite reflection sum of the Euclidean kernel."""
    _check_form(form)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    n = X.shape[1]
    if not 0 <= p <= n:
        raise RegimeError(f"reflection count p must satisfy 0 <= p <= n, got {p}")
    vals = np.zeros((X.shape[0], n))
    for subset in _reflection_subsets(list(range(p))):
        rho = (-1.0) ** len(subset) if negate_fiber else 1.0
        if form == "orbit":
            vals += rho * cauchy_g_batch(X, reflect_coords(y, subset))
        else:
            D = _flip_columns(X - y[None, :], subset)
            r2 = np.sum(D * D, axis=1)
            if np.any(r2 < 1e-18):
                raise SingularPoint("evaluation point on a kernel singularity")
            vals += rho * D * (r2 ** (-n / 2.0))[:, None] / sphere_area(n)
    return vals


def realproj_cauchy(p: int, x, y, form: str = "orbit", negate_fiber: bool = False) -> MultiVector:
    vals = realproj_cauchy_batch(p, np.atleast_2d(np.asarray(x, float)), y, form, negate_fiber)
    return MultiVector.from_vector(vals[0])


def _check_form(form: str):
    if form not in ("orbit", "paper_literal"):
        raise ValueError(f"unknown kernel form {form!r}; use 'orbit' or 'paper_literal'")


# -- Class B: Moebius strips ----------------------------------------------------

def moebius_green_batch(
    M: ManifoldSpec, X, y, R: int, form: str = "orbit", allow_noncharacter: bool = False
):
    """Batched Moebius-strip Green kernel: (values (B,), tail_bounds (B,))."""
    _check_form(form)
    if M.kind != "MoebiusStrip":
        raise RegimeError("moebius_green requires a MoebiusStrip spec")
    if M.bundle.l != 0 or M.bundle.negate_fiber:
        raise RegimeError("only the trivial pin bundle is constructed on Moebius strips")
    if M.sign_variant == "AllEven" and not allow_noncharacter:
        raise RegimeError(
            "AllEven sign variant is not a lattice character; pass allow_noncharacter=True "
            "to probe it anyway"
        )
    L = M.lattice
    n, k = M.n, M.k
    if k > n - 2:
        raise RegimeError("Moebius Green kernel needs k <= n-2")
    regularized = k == n - 2
    c = 1.0 / (sphere_area(n) * (1.0 - n))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    yv = np.asarray(y, dtype=float)
    D0 = X - yv[None, :]
    B = X.shape[0]
    out = np.empty(B)
    max_rows = _shell_array(k, R).shape[0] if R > 0 else 1
    for lo, hi in _chunks(B, max_rows, 1):
        Xc, Dc = X[lo:hi], D0[lo:hi]

        def shells():
            for r in range(R + 1):
                Ms, W = _shell_geometry(L, r)
                sgn = np.atleast_1d(moebius_sgn(Ms, M.sign_variant))
                U = Dc[None, :, :] + W[:, None, :]
                if form == "orbit":
                    # image source: last coordinate becomes sgn(w) * y_n
                    last = Xc[None, :, -1] - sgn[:, None] * yv[-1]
                else:
                    # literal: sign multiplies the whole last difference (no-op in the norm)
                    last = sgn[:, None] * Dc[None, :, -1]
                U[:, :, -1] = last
                r2 = np.einsum("mbj,mbj->mb", U, U)
                _guard_singular(r2)
                pw = r2 ** ((2.0 - n) / 2.0)
                if regularized and r > 0:
                    w2 = np.einsum("mj,mj->m", W, W)
                    pw = pw - (w2 ** ((2.0 - n) / 2.0))[:, None]
                yield pw * c

        out[lo:hi] = kahan_shell_sum((hi - lo,), shells())
    sep_block = np.linalg.norm(D0[:, :k], axis=1)
    if regularized:
        sep_full = np.sqrt(
            np.sum(D0[:, :-1] ** 2, axis=1) + (np.abs(X[:, -1]) + abs(yv[-1])) ** 2
        )
        tails = green_reg_tail(L, R, sep_full)
    else:
        tails = green_tail(L, R, sep_block)
    return out, tails


def moebius_green(
    M: ManifoldSpec, x, y, R: int, form: str = "orbit", allow_noncharacter: bool = False
) -> KernelEval:
    vals, tails = moebius_green_batch(
        M, np.atleast_2d(np.asarray(x, float)), y, R, form, allow_noncharacter
    )
    return KernelEval(MultiVector.scalar(M.n, float(vals[0])), R, float(tails[0]))


# -- Class B: Klein quotients ----------------------------------------------------

def klein_green_batch(M: ManifoldSpec, X, y, R: int, form: str = "orbit"):
    """Batched Klein-quotient Green kernel: (values (B,), tail_bounds (B,))."""
    _check_form(form)
    if M.kind != "KleinBottle":
        raise RegimeError("klein_green requires a KleinBottle spec")
    if M.bundle.l != 0 or M.bundle.negate_fiber:
        raise RegimeError("only the trivial pin bundle is constructed on Klein quotients")
    L = M.lattice
    n, k = M.n, M.k
    if not k < n - 2:
        raise RegimeError(
            "Klein Green kernel implemented for k < n-2 (higher ranks need a regularization "
            "that is not constructed here)"
        )
    c = 1.0 / (sphere_area(n) * (1.0 - n))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    yv = np.asarray(y, dtype=float)
    D0 = X - yv[None, :]
    B = X.shape[0]
    out = np.empty(B)
    max_rows = _shell_array(k, R).shape[0] if R > 0 else 1
    for lo, hi in _chunks(B, max_rows, 1):
        Xc, Dc = X[lo:hi], D0[lo:hi]

        def shells():
            for r in range(R + 1):
                Ms, W = _shell_geometry(L, r)
                sk = np.where(Ms[:, k - 1] % 2 == 0, 1.0, -1.0)
                U = Dc[None, :, :] + W[:, None, :]
                if form == "orbit":
                    # image source: k-th coordinate of the source is folded
                    U[:, :, k - 1] = Xc[None, :, k - 1] - sk[:, None] * yv[k - 1] + Ms[:, k - 1, None]
                else:
                    # literal: translation entry itself carries the parity sign
                    U[:, :, k - 1] = Dc[None, :, k - 1] + (sk * Ms[:, k - 1])[:, None]
                r2 = np.einsum("mbj,mbj->mb", U, U)
                _guard_singular(r2)
                yield (r2 ** ((2.0 - n) / 2.0)) * c

        out[lo:hi] = kahan_shell_sum((hi - lo,), shells())
    sep_eff = np.sqrt(
        np.sum(D0[:, : k - 1] ** 2, axis=1)
        + (np.abs(X[:, k - 1]) + abs(yv[k - 1])) ** 2
    )
    tails = green_tail(L, R, sep_eff)
    return out, tails


def klein_green(M: ManifoldSpec, x, y, R: int, form: str = "orbit") -> KernelEval:
    vals, tails = klein_green_batch(M, np.atleast_2d(np.asarray(x, float)), y, R, form)
    return KernelEval(MultiVector.scalar(M.n, float(vals[0])), R, float(tails[0]))


# -- descent and obstruction probes ----------------------------------------------


def _generators(M: ManifoldSpec):
    """(label, x-action, value sign, value map) for each deck generator."""
    gens = []
    if M.kind in ("Cylinder", "Torus", "Projective", "MoebiusStrip"):
        basis = M.lattice.basis
        for i in range(M.k):
            vi = basis[i]
            if M.kind == "MoebiusStrip":
                def act(x, vi=vi):
                    out = np.asarray(x, dtype=float).copy()
                    out[: M.k] += vi[: M.k]
                    out[-1] = -out[-1]
                    return out

                gens.append((f"twisted translation v{i + 1}", act, 1.0, None))
            else:
                delta = np.zeros(M.k, dtype=np.int64)
                delta[i] = 1
                rho = float(char_sign(M.bundle, delta))
                gens.append((f"translation v{i + 1}", lambda x, vi=vi: np.asarray(x, float) + vi, rho, None))
    if M.kind == "Projective":
        axes = M.reflection_axes()
        rho = -1.0 if M.bundle.negate_fiber else 1.0

        def value_map(mv: MultiVector) -> MultiVector:
            out = MultiVector(mv.n, mv.coeffs)
            vec = reflect_coords(mv.vector_part, axes)
            for j in range(mv.n):
                out.coeffs[1 << j] = vec[j]
            return out

        gens.append(("block reflection", lambda x: reflect_coords(x, axes), rho, value_map))
    if M.kind == "KleinBottle":
        basis = M.lattice.basis
        for i in range(M.k - 1):
            vi = basis[i]
            gens.append((f"translation v{i + 1}", lambda x, vi=vi: np.asarray(x, float) + vi, 1.0, None))

        def fold(x):
            out = np.asarray(x, dtype=float).copy()
            out[M.k - 1] = 1.0 - out[M.k - 1]
            return out

        gens.append(("fold translation e_k", fold, 1.0, None))
    return gens


def descent_check(M: ManifoldSpec, kernel, samples, R: int) -> dict:
    """Max deviation of K(gamma x, y) from rho(gamma) K(x, y) over samples.

    `kernel` is a callable (x, y) -> KernelEval.  Report-only: the caller
    decides what deviation is acceptable; `tail_context` carries the 2*tau
    certificate that equivariance of a truncated sum can honestly meet.
    """
    rows = []
    for label, act, rho, value_map in _generators(M):
        for idx, (x, y) in enumerate(samples):
            base = kernel(np.asarray(x, float), np.asarray(y, float))
            moved = kernel(act(x), np.asarray(y, float))
            expect = base.value * rho
            if value_map is not None:
                expect = value_map(expect)
            dev = float((moved.value - expect).norm())
            thr = float(base.tail_bound + moved.tail_bound)
            rows.append(
                {
                    "generator": label,
                    "sample": idx,
                    "deviation": dev,
                    "threshold": thr,
                }
            )
    max_dev = max((r["deviation"] for r in rows), default=0.0)
    max_thr = max((r["threshold"] for r in rows), default=0.0)
    return {
        "kind": M.kind,
        "trunc_radius": int(R),
        "rows": rows,
        "max_deviation": max_dev,
        "tail_context": max_thr,
        "within_bounds": all(r["deviation"] <= r["threshold"] for r in rows),
    }


def monogenic_obstruction_probe(f, axis: int, samples, scheme: FDScheme = FDScheme()) -> dict:
    """FD-Dirac residual of the axis-reflected field at each sample.

    A nonconstant monogenic field stops being monogenic after reflecting one
    coordinate; the probe reports min/max residuals so the caller can check
    the obstruction is bounded away from zero on its sample set.
    """
    residuals = []
    for x in samples:
        x = np.asarray(x, dtype=float)

        def reflected(z):
            return f(reflect_coords(z, [axis]))

        residuals.append(float(dirac_fd(reflected, x, scheme).norm()))
    return {
        "axis": axis,
        "residuals": residuals,
        "min_residual": min(residuals) if residuals else 0.0,
        "max_residual": max(residuals) if residuals else 0.0,
    }
