"""Reidemeister-Schreier machinery over PSL2(Z) coset tables.

Given a complete coset table this module produces a prefix-closed Schreier
transversal, a reduced Schreier generating set, a rewritten subgroup
presentation, and the free-product decomposition data (free rank plus the
counts of order-2 and order-3 factors, read off from fixed points of the
S and U actions).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .cosets import CosetTable
from .matgroup import (
    GeneratorWord,
    PslElement,
    invert_psl,
    normalize_psl,
    word_to_matrix,
)


def transversal(t: CosetTable) -> tuple[str, ...]:
    """BFS Schreier transversal, one PSL word per coset, prefix-closed.

    Edges are explored in the fixed order S < U < U^2 so the result is
    deterministic for a given table.
    """
    return transversal_with_tree(t)[0]


def transversal_with_tree(
    t: CosetTable,
) -> tuple[tuple[str, ...], frozenset[tuple[int, str]]]:
    """Transversal plus the set of (coset, generator) pairs its tree uses.

    A tree edge explored via the letter u (= U^-1) consumes the pair
    (target, 'U'); every tree edge consumes exactly one pair, so the raw
    Schreier generator count is 2*n - (n - 1).
    """
    words: list[str | None] = [None] * t.n
    words[0] = ""
    tree: set[tuple[int, str]] = set()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for letter in "SUu":
            d = t.apply(c, letter)
            if words[d] is None:
                words[d] = words[c] + letter
                tree.add((d, "U") if letter == "u" else (c, letter))
                queue.append(d)
    return tuple(words), frozenset(tree)  # type: ignore[arg-type]


def _schreier_word(t: CosetTable, tr, coset: int, letter: str) -> str:
    return normalize_psl(tr[coset] + letter + invert_psl(tr[t.apply(coset, letter)]))


def schreier_generators(
    t: CosetTable, tr: tuple[str, ...] | None = None
) -> list[tuple[GeneratorWord, PslElement]]:
    """Reduced Schreier generating set for the subgroup at coset 0.

    Raw Schreier generators t_c * a * t_{c*a}^-1 over a in {S, U} are
    thinned using the ambient torsion: the two generators of an S-orbit of
    size 2 are mutually inverse (one is kept), and the three generators
    around a U-orbit of size 3 multiply to 1 (the last nontrivial one is
    dropped).  Fixed points contribute the torsion generators themselves.
    For torsion-free subgroups the result is a free basis.
    """
    if tr is None:
        tr = transversal(t)
    gens: list[str] = []
    for c in range(t.n):
        d = t.s[c]
        if d == c:
            gens.append(_schreier_word(t, tr, c, "S"))
        elif c < d:
            w = _schreier_word(t, tr, c, "S")
            if w:
                gens.append(w)
    seen = set()
    for c in range(t.n):
        if c in seen:
            continue
        orbit = [c, t.u[c], t.u2[c]]
        seen.update(orbit)
        if orbit[1] == c:
            gens.append(_schreier_word(t, tr, c, "U"))
            continue
        words = [_schreier_word(t, tr, e, "U") for e in orbit]
        nontrivial = [w for w in words if w]
        if len(nontrivial) == 3:
            nontrivial = nontrivial[:2]
        elif len(nontrivial) == 2:
            nontrivial = nontrivial[:1]
        elif len(nontrivial) == 1:
            # forced identity: the other two edges are in the tree
            if not word_to_matrix(nontrivial[0]).is_identity():
                raise RuntimeError("corrupted table: non-closing U-orbit")
            nontrivial = []
        gens.extend(nontrivial)
    out = []
    for w in gens:
        elem = word_to_matrix(w)
        if t.trace(0, w) != 0:
            raise RuntimeError("Schreier generator does not fix coset 0")
        out.append((GeneratorWord(w, "psl"), elem))
    return out


@dataclass(frozen=True)
class KuroshDecomposition:
    """Free-product shape of a finite-index subgroup of PSL2(Z).

    free_rank free generators, f2 factors of order 2 and f3 factors of
    order 3; each finite factor is witnessed by a fixed coset and the
    transversal word conjugating the ambient torsion element into the
    subgroup.
    """

    free_rank: int
    f2: int
    f3: int
    witnesses_order2: tuple[tuple[int, str], ...]
    witnesses_order3: tuple[tuple[int, str], ...]


def kurosh_decompose(t: CosetTable) -> KuroshDecomposition:
    """Fixed-point counts plus Euler-characteristic bookkeeping.

    The free rank k satisfies k = 1 + i/6 - f2/2 - 2*f3/3 for a subgroup
    of index i; a non-integral or negative value means the table is
    corrupted, and is raised loudly.
    """
    tr = transversal(t)
    fixed_s = [c for c in range(t.n) if t.s[c] == c]
    fixed_u = [c for c in range(t.n) if t.u[c] == c]
    f2, f3 = len(fixed_s), len(fixed_u)
    k = 1 + Fraction(t.n, 6) - Fraction(f2, 2) - Fraction(2 * f3, 3)
    if k.denominator != 1 or k < 0:
        raise RuntimeError(
            "Euler identity violated (index %d, f2=%d, f3=%d): k=%s"
            % (t.n, f2, f3, k)
        )
    return KuroshDecomposition(
        free_rank=int(k),
        f2=f2,
        f3=f3,
        witnesses_order2=tuple((c, tr[c]) for c in fixed_s),
        witnesses_order3=tuple((c, tr[c]) for c in fixed_u),
    )


def is_free(t: CosetTable) -> bool:
    return all(t.s[c] != c for c in range(t.n)) and all(
        t.u[c] != c for c in range(t.n)
    )


def free_rank(t: CosetTable) -> int:
    """Rank of a torsion-free subgroup; rejects subgroups with torsion."""
    if not is_free(t):
        raise ValueError("subgroup has torsion; no free rank")
    dec = kurosh_decompose(t)
    assert dec.free_rank == 1 + t.n // 6
    return dec.free_rank


AMBIENT_RELATORS = ("SS", "UUU")


@dataclass(frozen=True)
class SubgroupPresentation:
    """Presentation on the nontrivial Schreier generators.

    witnesses[i] is the ambient word for generator i; relators are tuples
    of nonzero signed 1-based generator indices (+k for g_{k-1}, -k for
    its inverse).
    """

    witnesses: tuple[GeneratorWord, ...]
    relators: tuple[tuple[int, ...], ...]

    @property
    def n_generators(self) -> int:
        return len(self.witnesses)

    def serialize(self) -> str:
        lines = ["gens %d" % self.n_generators]
        lines.extend(w.letters for w in self.witnesses)
        lines.append("relators %d" % len(self.relators))
        for rel in self.relators:
            lines.append(
                " ".join(
                    "g%d" % (k - 1) if k > 0 else "g%d^-1" % (-k - 1) for k in rel
                )
            )
        return "\n".join(lines) + "\n"


def _free_reduce(symbols: list[int]) -> tuple[int, ...]:
    out: list[int] = []
    for s in symbols:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def _relator_key(rel: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical form under cyclic rotation and inversion, for dedup."""
    variants = []
    inv = tuple(-k for k in reversed(rel))
    for w in (rel, inv):
        for i in range(len(w)):
            variants.append(w[i:] + w[:i])
    return min(variants)


def subgroup_presentation(
    t: CosetTable,
    tr: tuple[str, ...] | None = None,
    ambient_relators: tuple[str, ...] = AMBIENT_RELATORS,
) -> SubgroupPresentation:
    """Reidemeister-Schreier rewriting of the ambient relator conjugates.

    Generators are the Schreier generators with freely trivial words
    dropped; each ambient relator is pushed through every coset and read
    off as a word in those generators.  Duplicate and freely trivial
    relators are discarded eagerly.
    """
    if tr is None:
        tr = transversal(t)
    index_of: dict[tuple[int, str], int] = {}
    witnesses: list[GeneratorWord] = []
    for c in range(t.n):
        for a in "SU":
            w = _schreier_word(t, tr, c, a)
            if w:
                index_of[(c, a)] = len(witnesses)
                witnesses.append(GeneratorWord(w, "psl"))
    relators: list[tuple[int, ...]] = []
    seen_keys = set()
    for c in range(t.n):
        for rel in ambient_relators:
            cur = c
            symbols: list[int] = []
            for letter in rel:
                if letter in "SU":
                    g = index_of.get((cur, letter))
                    if g is not None:
                        symbols.append(g + 1)
                    cur = t.apply(cur, letter)
                elif letter == "u":
                    prev = t.apply(cur, "u")
                    g = index_of.get((prev, "U"))
                    if g is not None:
                        symbols.append(-(g + 1))
                    cur = prev
                else:
                    raise ValueError("unknown relator letter %r" % letter)
            if cur != c:
                raise RuntimeError("relator scan did not close")
            reduced = _free_reduce(symbols)
            if not reduced:
                continue
            key = _relator_key(reduced)
            if key not in seen_keys:
                seen_keys.add(key)
                relators.append(reduced)
    witnesses, relators = _eliminate_short_relators(witnesses, relators)
    relators.sort(key=lambda r: (len(r), r))
    return SubgroupPresentation(tuple(witnesses), tuple(relators))


def _eliminate_short_relators(
    witnesses: list[GeneratorWord], relators: list[tuple[int, ...]]
) -> tuple[list[GeneratorWord], list[tuple[int, ...]]]:
    """Tietze elimination using relators of length 1 and mixed length 2.

    A relator g = 1 deletes the generator outright; a relator relating two
    distinct generators identifies one with (the inverse of) the other and
    the higher-numbered one is dropped.  Torsion relators g^2, g^3 are
    left alone, so the Kurosh shape stays visible in the presentation.
    """
    while True:
        cleaned: list[tuple[int, ...]] = []
        seen = set()
        for rel in relators:
            rel = _free_reduce(list(rel))
            if not rel:
                continue
            key = _relator_key(rel)
            if key not in seen:
                seen.add(key)
                cleaned.append(rel)
        relators = cleaned
        victim = repl = None
        for rel in relators:
            if len(rel) == 1:
                victim, repl = abs(rel[0]), ()
                break
            if len(rel) == 2 and abs(rel[0]) != abs(rel[1]):
                a, b = rel
                if abs(a) > abs(b):
                    a, b = b, a
                # g_|b|^sign(b) = g_a^{-sign(a)}
                victim = abs(b)
                repl = (-a,) if b > 0 else (a,)
                break
        if victim is None:
            return witnesses, relators

        def shift(k: int) -> int:
            mag = abs(k) - (abs(k) > victim)
            return mag if k > 0 else -mag

        inv_repl = tuple(-k for k in reversed(repl))
        out: list[tuple[int, ...]] = []
        for rel in relators:
            symbols: list[int] = []
            for k in rel:
                if abs(k) == victim:
                    symbols.extend(repl if k > 0 else inv_repl)
                else:
                    symbols.append(k)
            out.append(tuple(shift(k) for k in symbols))
        relators = out
        del witnesses[victim - 1]


def abelianized_relation_matrix(p: SubgroupPresentation) -> list[list[int]]:
    """Exponent-sum rows of the relators, one column per generator."""
    rows = []
    for rel in p.relators:
        row = [0] * p.n_generators
        for k in rel:
            row[abs(k) - 1] += 1 if k > 0 else -1
        rows.append(row)
    return rows
