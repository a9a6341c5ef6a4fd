"""Polynomial vector fields, Lie operations and iterated bracket families."""

from __future__ import annotations

from .poly import Polynomial, VarTable


class VectorField:
    """Tuple of polynomial components over one variable table, with a label
    recording how the field was produced (generator name or bracket word)."""

    __slots__ = ("components", "label")

    def __init__(self, components, label):
        components = tuple(components)
        if not components:
            raise ValueError("vector field needs at least one component")
        vars = components[0].vars
        for c in components[1:]:
            if c.vars != vars:
                raise ValueError("components live over different variable tables")
        self.components = components
        self.label = label

    @property
    def vars(self):
        return self.components[0].vars

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def evaluate(self, point):
        return tuple(c.evaluate(point) for c in self.components)

    def normalized(self):
        """Scale so the first nonzero component is monic; canonical within
        the ray {c*v : c rational, c != 0}."""
        for comp in self.components:
            if not comp.is_zero():
                lc = comp.leading_coefficient()
                if lc == 1:
                    return self
                inv = 1 / lc
                return VectorField((c * inv for c in self.components), self.label)
        return self

    def __str__(self):
        body = ", ".join(str(c) for c in self.components)
        return f"{self.label} = ({body})"

    def __repr__(self):
        return f"VectorField({self})"


def lie_derivative(field, p):
    """Derivative of the scalar p along field: sum_i dp/dx_i * field_i."""
    total = Polynomial.zero(p.vars, p.order)
    for i, comp in enumerate(field.components):
        if comp.is_zero():
            continue
        dp = p.partial_derivative(i)
        if not dp.is_zero():
            total = total + dp * comp
    return total


def lie_bracket(f, g, label=None):
    """Bracket [f, g]; component j is L_f(g_j) - L_g(f_j)."""
    if f.vars != g.vars or len(f) != len(g):
        raise ValueError("bracket of fields over different spaces")
    if label is None:
        label = f"[{f.label},{g.label}]"
    comps = [lie_derivative(f, gj) - lie_derivative(g, fj) for fj, gj in zip(f, g)]
    return VectorField(comps, label)


class SystemSpec:
    """Control-affine system dx/dt = f(x) + sum_i u_i g_i(x)."""

    __slots__ = ("vars", "drift", "inputs", "name")

    def __init__(self, vars, drift, inputs, name=None):
        if not isinstance(vars, VarTable):
            vars = VarTable(vars)
        if drift.vars != vars or len(drift) != len(vars):
            raise ValueError("drift must have one component per state variable")
        inputs = tuple(inputs)
        if not inputs:
            raise ValueError("system needs at least one input field")
        for g in inputs:
            if g.vars != vars or len(g) != len(vars):
                raise ValueError("input field must have one component per state variable")
        self.vars = vars
        self.drift = drift
        self.inputs = inputs
        self.name = name

    @property
    def dimension(self):
        return len(self.vars)

    def generators(self, mode):
        """Depth-0 fields: drift and inputs, or inputs alone in strong mode."""
        if mode == "accessibility":
            return (self.drift,) + self.inputs
        if mode == "strong":
            return self.inputs
        raise ValueError(f"unknown mode {mode!r}")

    def operators(self):
        """Fields bracketed against each generation; zero drift is skipped."""
        ops = [] if self.drift.is_zero() else [self.drift]
        return tuple(ops) + self.inputs


class BracketFamily:
    """Generations of iterated brackets; generation k+1 brackets every
    operator against generation k only, dropping zero fields and fields
    that are scalar multiples of one already kept."""

    __slots__ = ("system", "mode", "generations", "_kept")

    def __init__(self, system, mode, generations, kept):
        self.system = system
        self.mode = mode
        self.generations = generations
        self._kept = kept

    @classmethod
    def initial(cls, system, mode="accessibility"):
        kept = {}
        gen0 = []
        for field in system.generators(mode):
            if field.is_zero():
                continue
            key = _ray_key(field)
            if key in kept:
                continue
            kept[key] = field
            gen0.append(field)
        return cls(system, mode, [gen0], kept)

    @property
    def depth(self):
        return len(self.generations) - 1

    def members(self, depth=None):
        """All fields of the family up to the given depth (default: all)."""
        if depth is None:
            depth = self.depth
        if depth > self.depth:
            raise ValueError(f"family only extends to depth {self.depth}")
        out = []
        for gen in self.generations[: depth + 1]:
            out.extend(gen)
        return out

    def newest(self):
        return self.generations[-1]


def _ray_key(field):
    v = field.normalized()
    return tuple(frozenset(c.coeffs.items()) for c in v.components)


def extend_family(family):
    """Family one depth deeper; shares the existing generations."""
    kept = dict(family._kept)
    new_gen = []
    for op in family.system.operators():
        for w in family.newest():
            b = lie_bracket(op, w)
            if b.is_zero():
                continue
            key = _ray_key(b)
            if key in kept:
                continue
            kept[key] = b
            new_gen.append(b)
    return BracketFamily(
        family.system, family.mode, family.generations + [new_gen], kept
    )
