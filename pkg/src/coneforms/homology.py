"""Finite-dimensional truncations of the de Rham and Koszul-Brylinski
complexes on a symplectic chart, with exact homology ranks.

The stratum bases enumerate monomial forms x^a dx_I with coefficient degree
|a| <= D.  Both operators lower the coefficient degree by one, so the
truncated spaces are subcomplexes, and the boundary matrices block-diagonalize
over the coefficient degree.  Ranks are computed per block by exact sparse
elimination over the rationals.

Truncation produces boundary artifacts concentrated in the top coefficient
degree (closed forms there have no antiderivative inside the truncation).
`homology_ranks` reports the ranks of the truncated complex as they are;
`stable_homology_ranks` reports the ranks of the image of the inclusion-induced
map into the next truncation, which are the truncation-independent answers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .forms import DifferentialForm
from .linalg import row_space_basis, solve_exact, sparse_rank
from .ring import CoefficientElement
from .symplectic import GroupAction, SymplecticChart, brylinski_delta

DELTA = "delta"
DE_RHAM = "deRham"


def _normalize_operator(operator: str) -> str:
    low = operator.lower()
    if low == "delta":
        return DELTA
    if low in ("derham", "de_rham", "d"):
        return DE_RHAM
    raise ValueError(f"unknown operator {operator!r}; use 'delta' or 'deRham'")


def _monomials(n_vars: int, degree: int):
    """Exponent tuples of total degree `degree`, lexicographic order."""
    if n_vars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(n_vars - 1, degree - first):
            yield (first,) + rest


@dataclass
class ComplexStratum:
    """One form degree of a truncated complex with its outgoing boundary."""

    degree: int
    operator: str
    basis: list
    boundary_matrix: dict  # column-major: {source position: {target position: Fraction}}
    rank: int
    block_dims: dict = field(default_factory=dict)     # {m: dimension}
    block_ranks: dict = field(default_factory=dict)    # {m: outgoing rank}
    block_offsets: dict = field(default_factory=dict)  # {m: first flat position}
    vectors: list | None = None  # invariant-basis vectors in monomial coordinates

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _monomial_form(s: SymplecticChart, powers, idx) -> DifferentialForm:
    key = (tuple(powers), ())
    coeff = CoefficientElement.make(s.chart, {key: 1})
    return DifferentialForm.make(s.chart, len(idx), {tuple(idx): coeff})


def _form_to_coords(form: DifferentialForm, positions: dict) -> dict:
    """Expand a polynomial form into {basis position: Fraction}."""
    coords: dict = {}
    for idx, coeff in form.components.items():
        for (powers, modes), val in coeff.terms.items():
            if any(modes):
                raise ValueError("unexpected angle dependence in complex build")
            if not val.is_real:
                raise ValueError("unexpected imaginary coefficient in complex build")
            pos = positions.get((powers, idx))
            if pos is None:
                raise ValueError(
                    f"image term {powers} dx{idx} escapes the truncated basis")
            coords[pos] = coords.get(pos, Fraction(0)) + val.re
    return {k: v for k, v in coords.items() if v}


def _apply_operator(s: SymplecticChart, operator: str,
                    form: DifferentialForm) -> DifferentialForm:
    if operator == DELTA:
        return brylinski_delta(form, s)
    return form.exterior_derivative()


def _invariant_block_basis(s: SymplecticChart, action: GroupAction,
                           labels) -> list:
    """Reduced row basis of the invariant subspace of one (p, m) block."""
    positions = {lab: i for i, lab in enumerate(labels)}
    rows = []
    for powers, idx in labels:
        averaged = action.average_form(_monomial_form(s, powers, idx))
        vec = [Fraction(0)] * len(labels)
        for pos, val in _form_to_coords(averaged, positions).items():
            vec[pos] = val
        rows.append(vec)
    return [row for row in row_space_basis(rows) if any(row)]


def build_stratified_complex(s: SymplecticChart, max_coeff_degree: int,
                             operator: str,
                             action: GroupAction | None = None) -> list[ComplexStratum]:
    """Strata for p = 0..2n with exact boundary matrices and ranks.

    With `action` supplied the bases span the invariant subspaces, computed by
    exact group averaging of the generator's pullback on each block.
    """
    if max_coeff_degree < 0:
        raise ValueError("truncation degree must be >= 0")
    operator = _normalize_operator(operator)
    if action is not None and action.symplectic.chart != s.chart:
        raise ValueError("group action lives on a different chart")
    dim = s.dimension
    n_vars = dim

    # per (p, m) monomial labels in deterministic order
    labels: dict = {}
    for p in range(dim + 1):
        for m in range(max_coeff_degree + 1):
            block = []
            for powers in _monomials(n_vars, m):
                for idx in itertools.combinations(range(dim), p):
                    block.append((powers, idx))
            labels[(p, m)] = block

    inv_basis: dict = {}
    if action is not None:
        for key, block in labels.items():
            inv_basis[key] = _invariant_block_basis(s, action, block)

    strata: list[ComplexStratum] = []
    target_of = (lambda p: p - 1) if operator == DELTA else (lambda p: p + 1)

    for p in range(dim + 1):
        basis: list = []
        vectors: list | None = None if action is None else []
        block_dims: dict = {}
        block_offsets: dict = {}
        for m in range(max_coeff_degree + 1):
            block_offsets[m] = len(basis)
            if action is None:
                entries = labels[(p, m)]
            else:
                entries = [("inv", p, m, j) for j in range(len(inv_basis[(p, m)]))]
                for vec in inv_basis[(p, m)]:
                    vectors.append([
                        (labels[(p, m)][pos], val)
                        for pos, val in enumerate(vec) if val])
            block_dims[m] = len(entries)
            basis.extend(entries)

        q = target_of(p)
        boundary: dict = {}
        block_ranks: dict = {}
        target_offsets: dict = {}
        if 0 <= q <= dim:
            offset = 0
            for m in range(max_coeff_degree + 1):
                target_offsets[m] = offset
                if action is None:
                    offset += len(labels[(q, m)])
                else:
                    offset += len(inv_basis[(q, m)])

        for m in range(max_coeff_degree + 1):
            block_cols: dict = {}
            if not (0 <= q <= dim) or m == 0:
                block_ranks[m] = 0
                continue
            target_labels = labels[(q, m - 1)]
            target_pos = {lab: i for i, lab in enumerate(target_labels)}
            if action is None:
                for col, (powers, idx) in enumerate(labels[(p, m)]):
                    image = _apply_operator(s, operator, _monomial_form(s, powers, idx))
                    coords = _form_to_coords(image, target_pos)
                    if coords:
                        block_cols[col] = coords
            else:
                source_rows = inv_basis[(p, m)]
                target_rows = inv_basis[(q, m - 1)]
                raw_cols = []
                for vec in source_rows:
                    total: dict = {}
                    for pos, val in enumerate(vec):
                        if not val:
                            continue
                        powers, idx = labels[(p, m)][pos]
                        image = _apply_operator(
                            s, operator, _monomial_form(s, powers, idx))
                        for tpos, tval in _form_to_coords(image, target_pos).items():
                            total[tpos] = total.get(tpos, Fraction(0)) + val * tval
                    raw_cols.append({k: v for k, v in total.items() if v})
                # express images in the invariant basis of the target block
                if target_rows:
                    a_rows = [[target_rows[r][c] for r in range(len(target_rows))]
                              for c in range(len(target_labels))]
                    b_cols = []
                    for col_dict in raw_cols:
                        b_cols.append([col_dict.get(c, Fraction(0))
                                       for c in range(len(target_labels))])
                    solutions = solve_exact(a_rows, b_cols)
                    for col, sol in enumerate(solutions):
                        entries = {r: v for r, v in enumerate(sol) if v}
                        if entries:
                            block_cols[col] = entries
                else:
                    for col_dict in raw_cols:
                        if col_dict:
                            raise ValueError(
                                "boundary image leaves the invariant subcomplex")
            block_ranks[m] = sparse_rank(block_cols)
            src_off = block_offsets[m]
            tgt_off = target_offsets[m - 1]
            for col, entries in block_cols.items():
                boundary[src_off + col] = {tgt_off + r: v for r, v in entries.items()}

        strata.append(ComplexStratum(
            degree=p,
            operator=operator,
            basis=basis,
            boundary_matrix=boundary,
            rank=sum(block_ranks.values()),
            block_dims=block_dims,
            block_ranks=block_ranks,
            block_offsets=block_offsets,
            vectors=vectors,
        ))

    _check_compositions(strata)
    return strata


def _check_compositions(strata: list[ComplexStratum]):
    by_degree = {st.degree: st for st in strata}
    for st in strata:
        q = st.degree - 1 if st.operator == DELTA else st.degree + 1
        nxt = by_degree.get(q)
        if nxt is None:
            continue
        for col, entries in st.boundary_matrix.items():
            acc: dict = {}
            for mid, v in entries.items():
                for out, w in nxt.boundary_matrix.get(mid, {}).items():
                    acc[out] = acc.get(out, Fraction(0)) + v * w
            if any(acc.values()):
                raise ValueError(
                    f"boundary composition is nonzero out of degree {st.degree}, "
                    f"column {col}")


def homology_ranks(strata: list[ComplexStratum]) -> list[int]:
    """dim ker - rank(incoming boundary) at every form degree.

    Rejects input whose consecutive boundary compositions fail to vanish.
    """
    if not strata:
        return []
    _check_compositions(strata)
    operator = strata[0].operator
    by_degree = {st.degree: st for st in strata}
    out = []
    for st in strata:
        source = st.degree + 1 if operator == DELTA else st.degree - 1
        incoming = by_degree.get(source)
        in_rank = incoming.rank if incoming is not None else 0
        out.append(st.dimension - st.rank - in_rank)
    return out


def stable_homology_ranks(strata: list[ComplexStratum]) -> list[int]:
    """Ranks of the inclusion-induced map into the next truncation.

    Blocks of coefficient degree m < D already see their full incoming
    boundary, so their homology survives unchanged; the top-degree blocks
    acquire complete incoming boundaries one truncation later and contribute
    the untruncated answer, which vanishes except for the degree-zero corner.
    """
    if not strata:
        return []
    operator = strata[0].operator
    by_degree = {st.degree: st for st in strata}
    top_degree = max(st.degree for st in strata)
    max_m = max((max(st.block_dims) for st in strata if st.block_dims), default=0)
    out = []
    for st in strata:
        source = st.degree + 1 if operator == DELTA else st.degree - 1
        incoming = by_degree.get(source)
        total = 0
        for m, dim_m in st.block_dims.items():
            if m >= max_m:
                continue
            in_rank = incoming.block_ranks.get(m + 1, 0) if incoming else 0
            total += dim_m - st.block_ranks.get(m, 0) - in_rank
        if max_m == 0:
            # degenerate D = 0 truncation: only the corner class survives
            survivor = (st.degree == 0) if operator == DE_RHAM else (st.degree == top_degree)
            total += 1 if survivor else 0
        out.append(total)
    return out
