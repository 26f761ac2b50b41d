"""The endomorphism dgla of a complex.

End(C) in degree k is the space of linear maps C^* -> C^{*+k}; the
differential is the graded commutator with d_C and the bracket is the graded
commutator of compositions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dgla import Dgla
from .graded import (Complex, GradedMap, GradedVectorSpace, GVec,
                     StructuralError)
from .linalg import Q


@dataclass(frozen=True)
class EndDgla:
    """End(C) as an explicit Dgla, with converters to and from graded maps.

    Basis of degree k: one elementary operator per (source basis vector,
    target basis vector in degree + k) pair, labelled "src>dst".
    """

    complex: Complex
    dgla: Dgla
    index: dict  # end degree -> tuple of (src_deg, src_idx, dst_idx)

    @property
    def space(self) -> GradedVectorSpace:
        return self.dgla.space

    def element_to_map(self, x: GVec) -> GradedMap:
        """A homogeneous End element as a GradedMap (zero element -> shift 0)."""
        degs = [k for k, v in x.items() if any(v)]
        if not degs:
            return GradedMap(self.complex.space, self.complex.space, 0, {})
        if len(degs) > 1:
            raise StructuralError("element is not homogeneous")
        k = degs[0]
        sp = self.complex.space
        blocks: dict[int, list] = {}
        for coeff, (src_deg, src_idx, dst_idx) in zip(x[k], self.index[k]):
            if not coeff:
                continue
            if src_deg not in blocks:
                blocks[src_deg] = [[Q(0)] * sp.dim(src_deg)
                                   for _ in range(sp.dim(src_deg + k))]
            blocks[src_deg][dst_idx][src_idx] += coeff
        return GradedMap(sp, sp, k, blocks)

    def map_to_element(self, f: GradedMap) -> GVec:
        k = f.shift
        if k not in self.index:
            if all(not any(c for row in f.block(d) for c in row)
                   for d in self.complex.space.degrees):
                return {}
            raise StructuralError(f"no endomorphisms of degree {k}")
        coords = []
        for (src_deg, src_idx, dst_idx) in self.index[k]:
            coords.append(f.block(src_deg)[dst_idx][src_idx]
                          if self.complex.space.dim(src_deg + k) else Q(0))
        return {k: coords} if any(coords) else {}


def end_dgla(c: Complex) -> EndDgla:
    sp = c.space
    degs = sorted(sp.degrees)
    index: dict[int, list] = {}
    for k in range(min(degs) - max(degs), max(degs) - min(degs) + 1):
        entries = []
        for src_deg in degs:
            if sp.dim(src_deg + k) == 0:
                continue
            for src_idx in range(sp.dim(src_deg)):
                for dst_idx in range(sp.dim(src_deg + k)):
                    entries.append((src_deg, src_idx, dst_idx))
        if entries:
            index[k] = tuple(entries)

    components = {
        k: tuple(f"{sp.label(sd, si)}>{sp.label(sd + k, di)}"
                 for (sd, si, di) in entries)
        for k, entries in index.items()
    }
    space = GradedVectorSpace(components)

    def elem_map(k: int, pos: int) -> GradedMap:
        sd, si, di = index[k][pos]
        block = [[Q(1) if (r == di and cc == si) else Q(0)
                  for cc in range(sp.dim(sd))] for r in range(sp.dim(sd + k))]
        return GradedMap(sp, sp, k, {sd: block})

    def map_coords(f: GradedMap) -> list:
        k = f.shift
        return [f.block(sd)[di][si] for (sd, si, di) in index[k]]

    d_blocks = {}
    for k in index:
        if k + 1 not in index:
            continue
        cols = []
        for pos in range(len(index[k])):
            f = elem_map(k, pos)
            # [d, f] = d o f - (-1)^k f o d
            df = c.differential.compose(f)
            fd = f.compose(c.differential)
            sign = Q(-1) if k % 2 else Q(1)
            comm = df.add(fd.scale(-sign))
            cols.append(map_coords(comm))
        d_blocks[k] = [[cols[j][i] for j in range(len(cols))]
                       for i in range(len(index[k + 1]))]
    cx = Complex(space, GradedMap(space, space, 1, d_blocks))

    brackets = {}
    for m in index:
        for n in index:
            if m > n or (m + n) not in index:
                continue
            out_dim = len(index[m + n])
            sign = Q(-1) if (m * n) % 2 else Q(1)
            table = []
            any_nonzero = False
            for i in range(len(index[m])):
                fi = elem_map(m, i)
                row = []
                for j in range(len(index[n])):
                    fj = elem_map(n, j)
                    comm = fi.compose(fj).add(fj.compose(fi).scale(-sign))
                    v = map_coords(comm)
                    if any(v):
                        any_nonzero = True
                    row.append(v)
                table.append(row)
            if any_nonzero:
                brackets[(m, n)] = table
    return EndDgla(complex=c, dgla=Dgla(cx, brackets), index=index)
