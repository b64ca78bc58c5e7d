"""Untyped lambda terms: constants, integers, de Bruijn binders, meta-variables.

Terms carry all object-level data: arguments of atomic formulas, encoded
programs, witness values. Binders use de Bruijn indices; the ``hint`` on a
``Lam`` is a display name only and is excluded from equality, so ``==`` on
terms is alpha-equivalence.

Meta-variable instantiations are required to be closed with respect to de
Bruijn indices (they may contain other metas and whole lambdas, but no free
``Bound``), which makes substitution under binders capture-free without
index shifting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

DEFAULT_FUEL = 100_000


class TermError(Exception):
    pass


class FuelExhausted(TermError):
    """Raised when beta-normalization runs out of its step budget."""


class IntRangeError(TermError):
    """An integer literal outside the signed 64-bit range."""


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Int:
    value: int

    def __post_init__(self) -> None:
        if not (INT_MIN <= self.value <= INT_MAX):
            raise IntRangeError(f"integer out of 64-bit range: {self.value}")

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class Var:
    """A free object variable, bound at the formula level (forall/exists)."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Bound:
    """A de Bruijn index referring to an enclosing Lam."""

    index: int

    def __str__(self) -> str:
        return f"#{self.index}"


@dataclass(frozen=True, slots=True)
class Meta:
    name: str
    uid: int

    def __str__(self) -> str:
        return f"?{self.name}{self.uid}"


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    hint: str = field(compare=False)
    body: "Term" = field()


Term = Union[Const, Int, Var, Bound, Meta, App, Lam]


def alpha_eq(t1: Term, t2: Term) -> bool:
    """Equality up to renaming of bound variables (hint names ignored)."""
    return t1 == t2


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split an application chain into its head and argument list."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def app(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def free_metas(t: Term) -> set[int]:
    out: set[int] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Meta):
            out.add(s.uid)
        elif isinstance(s, App):
            stack.append(s.fn)
            stack.append(s.arg)
        elif isinstance(s, Lam):
            stack.append(s.body)
    return out


def free_vars(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            out.add(s.name)
        elif isinstance(s, App):
            stack.append(s.fn)
            stack.append(s.arg)
        elif isinstance(s, Lam):
            stack.append(s.body)
    return out


def free_bounds(t: Term, depth: int = 0) -> set[int]:
    """Free de Bruijn indices of ``t``, relative to ``depth`` binders."""
    if isinstance(t, Bound):
        return {t.index - depth} if t.index >= depth else set()
    if isinstance(t, App):
        return free_bounds(t.fn, depth) | free_bounds(t.arg, depth)
    if isinstance(t, Lam):
        return free_bounds(t.body, depth + 1)
    return set()


def is_closed(t: Term) -> bool:
    """Closed terms: no free Bound indices, no Vars, no metas."""
    return not free_bounds(t) and not free_vars(t) and not free_metas(t)


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    if isinstance(t, Bound):
        return Bound(t.index + by) if t.index >= cutoff else t
    if isinstance(t, App):
        return App(shift(t.fn, by, cutoff), shift(t.arg, by, cutoff))
    if isinstance(t, Lam):
        return Lam(t.hint, shift(t.body, by, cutoff + 1))
    return t


def subst_bound(t: Term, index: int, repl: Term) -> Term:
    if isinstance(t, Bound):
        return repl if t.index == index else t
    if isinstance(t, App):
        return App(subst_bound(t.fn, index, repl), subst_bound(t.arg, index, repl))
    if isinstance(t, Lam):
        return Lam(t.hint, subst_bound(t.body, index + 1, shift(repl, 1)))
    return t


def subst_var(t: Term, name: str, repl: Term) -> Term:
    """Replace the free object variable ``name`` by a closed term."""
    if isinstance(t, Var):
        return repl if t.name == name else t
    if isinstance(t, App):
        return App(subst_var(t.fn, name, repl), subst_var(t.arg, name, repl))
    if isinstance(t, Lam):
        # repl is closed w.r.t. de Bruijn indices, no shifting required
        return Lam(t.hint, subst_var(t.body, name, repl))
    return t


def _contract(lam: Lam, arg: Term) -> Term:
    return shift(subst_bound(lam.body, 0, shift(arg, 1)), -1)


def _whnf(t: Term, budget: list[int]) -> Term:
    while isinstance(t, App):
        fn = _whnf(t.fn, budget)
        if isinstance(fn, Lam):
            budget[0] -= 1
            if budget[0] < 0:
                raise FuelExhausted("beta reduction budget exhausted")
            t = _contract(fn, t.arg)
        else:
            return t if fn is t.fn else App(fn, t.arg)
    return t


def _nf(t: Term, budget: list[int]) -> Term:
    t = _whnf(t, budget)
    if isinstance(t, Lam):
        return Lam(t.hint, _nf(t.body, budget))
    if isinstance(t, App):
        # head of a whnf application is not a Lam, so normalizing the parts
        # cannot expose a new top-level redex
        return App(_nf(t.fn, budget), _nf(t.arg, budget))
    return t


def beta_normalize(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Leftmost-outermost beta-normalization with a step budget.

    Raises FuelExhausted if more than ``fuel`` contractions are needed
    (untyped terms may diverge).
    """
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    return _nf(t, [fuel])


def is_normal(t: Term) -> bool:
    if isinstance(t, App):
        return not isinstance(t.fn, Lam) and is_normal(t.fn) and is_normal(t.arg)
    if isinstance(t, Lam):
        return is_normal(t.body)
    return True


def check_term_size(t: Term, cap: int = DEFAULT_FUEL) -> None:
    """Raise FuelExhausted when ``t`` has more than ``cap`` nodes.

    Counts tree nodes with an early exit, so the cost is bounded by the
    cap even when sharing makes the tree exponentially larger than the
    DAG that represents it.
    """
    budget = cap
    stack = [t]
    while stack:
        s = stack.pop()
        budget -= 1
        if budget < 0:
            raise FuelExhausted(f"term exceeds {cap} nodes")
        if isinstance(s, App):
            stack.append(s.fn)
            stack.append(s.arg)
        elif isinstance(s, Lam):
            stack.append(s.body)


class Substitution:
    """An idempotent finite map from meta-variable ids to terms.

    Images must be closed w.r.t. de Bruijn indices. ``bind`` applies the
    existing map to the new image, performs the occurs check, and composes,
    so applying the result twice equals applying it once.
    """

    __slots__ = ("_map", "_names")

    def __init__(self, mapping: dict[int, Term] | None = None,
                 names: dict[int, str] | None = None):
        self._map: dict[int, Term] = mapping or {}
        self._names: dict[int, str] = names or {}

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, uid: int) -> bool:
        return uid in self._map

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Substitution) and self._map == other._map

    def __repr__(self) -> str:
        items = ", ".join(f"?{self._names.get(k, '')}{k} -> {v!r}"
                          for k, v in sorted(self._map.items()))
        return "{" + items + "}"

    def items(self) -> Iterator[tuple[int, Term]]:
        return iter(self._map.items())

    def lookup(self, uid: int) -> Term | None:
        return self._map.get(uid)

    def apply(self, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
        """Replace mapped metas and re-normalize if replacement fired."""
        replaced, changed = self._replace(t)
        if changed and not is_normal(replaced):
            return beta_normalize(replaced, fuel)
        return replaced

    def _replace(self, t: Term) -> tuple[Term, bool]:
        if isinstance(t, Meta):
            img = self._map.get(t.uid)
            return (img, True) if img is not None else (t, False)
        if isinstance(t, App):
            fn, c1 = self._replace(t.fn)
            arg, c2 = self._replace(t.arg)
            return (App(fn, arg), True) if c1 or c2 else (t, False)
        if isinstance(t, Lam):
            body, c = self._replace(t.body)
            return (Lam(t.hint, body), True) if c else (t, False)
        return t, False

    def bind(self, m: Meta, t: Term) -> "Substitution | None":
        """Extend with ``m -> t``; None if the occurs check fails.

        Images are stored beta-normal, so applying the substitution to a
        normal term yields a normal term."""
        img = self.apply(t)
        if not is_normal(img):
            img = beta_normalize(img)
        if m.uid in free_metas(img):
            return None
        if free_bounds(img):
            raise TermError(f"substitution image not closed: {img!r}")
        check_term_size(img)
        single = Substitution({m.uid: img}, {m.uid: m.name})
        new_map: dict[int, Term] = {}
        for k, v in self._map.items():
            nv = single.apply(v)
            if nv is not v:
                # composition can duplicate subterms; keep images bounded
                check_term_size(nv)
            new_map[k] = nv
        new_map[m.uid] = img
        names = dict(self._names)
        names[m.uid] = m.name
        return Substitution(new_map, names)


EMPTY_SUBST = Substitution()


def apply_subst(sigma: Substitution, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    return sigma.apply(t, fuel)
