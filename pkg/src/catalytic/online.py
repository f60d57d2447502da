"""Coefficient-at-a-time evaluation of expressions in P, Q, x, t on series.

An expression is compiled into a DAG of nodes.  At order n every node's
x^n coefficient is computed from its children, given the x^n coefficients of
P and Q.  The parts of products and quotients that only involve lower orders
are cached on the first pass at each order, so extra passes with trial values
for P_n and Q_n (used by the solvers) cost O(1) polynomial products per node.
"""
from __future__ import annotations

from .algebra import upoly
from .algebra.multipoly import MultiPoly
from .errors import DividedDifferenceFailure, DivisibilityFailure, NotAUnit
from .frontend import Add, Div, Expr, Mul, Neg, Num, Pow, Sub, Var

_ONE_T = upoly.const(1)


class _Node:
    __slots__ = ("kind", "a", "b", "data", "dynamic", "coeffs", "cache", "nz")

    def __init__(self, kind, a=None, b=None, data=None, dynamic=False):
        self.kind = kind
        self.a = a
        self.b = b
        self.data = data
        self.dynamic = dynamic
        self.coeffs: list = []
        self.cache = None
        # indices of nonzero finalized coefficients
        self.nz: list[int] = []


class OnlineEvaluator:
    def __init__(self):
        self.nodes: list[_Node] = []
        self._memo: dict = {}
        self.p: list = []
        self.q: list = []
        self.n = -1

    # --- compilation ----------------------------------------------------

    def _add_node(self, key, kind, a=None, b=None, data=None) -> int:
        if key is not None and key in self._memo:
            return self._memo[key]
        dyn = kind in ("P", "Q") or any(
            i is not None and self.nodes[i].dynamic for i in (a, b)
        )
        self.nodes.append(_Node(kind, a, b, data, dyn))
        idx = len(self.nodes) - 1
        if key is not None:
            self._memo[key] = idx
        return idx

    def leaf(self, name: str) -> int:
        if name in ("P", "Q"):
            return self._add_node(name, name)
        if name == "x":
            return self._add_node("x", "xt", data={1: _ONE_T})
        if name == "t":
            return self._add_node("t", "xt", data={0: upoly.from_ints(0, 1)})
        raise ValueError(name)

    def constant(self, c) -> int:
        c = upoly.const(c)
        return self._add_node(("c", c), "xt", data={0: c} if c else {})

    def binary(self, kind: str, a: int, b: int) -> int:
        if kind in ("add", "mul") and a > b:
            a, b = b, a
        return self._add_node((kind, a, b), kind, a, b)

    def neg(self, a: int) -> int:
        return self._add_node(("neg", a), "neg", a)

    def scaled(self, a: int, xt: dict) -> int:
        """Multiply node ``a`` by a polynomial in x and t given as {x-degree: t-upoly}."""
        key = ("scal", a, tuple(sorted(xt.items())))
        return self._add_node(key, "scal", a, data=dict(xt))

    def power(self, a: int, k: int) -> int:
        if k == 0:
            return self.constant(1)
        if k == 1:
            return a
        key = ("pow", a, k)
        if key in self._memo:
            return self._memo[key]
        half = self.power(a, k // 2)
        out = self.binary("mul", half, half)
        if k % 2:
            out = self.binary("mul", out, a)
        self._memo[key] = out
        return out

    def compile_expr(self, e: Expr) -> int:
        if isinstance(e, Num):
            return self.constant(e.value)
        if isinstance(e, Var):
            return self.leaf(e.name)
        if isinstance(e, Neg):
            return self.neg(self.compile_expr(e.operand))
        if isinstance(e, Pow):
            return self.power(self.compile_expr(e.base), e.exponent)
        kind = {Add: "add", Sub: "sub", Mul: "mul", Div: "div"}[type(e)]
        return self.binary(kind, self.compile_expr(e.left), self.compile_expr(e.right))

    def compile_poly(self, F: MultiPoly) -> int:
        """Compile F(P, Q, x, t) as a sum over P^a Q^b times x,t-polynomials."""
        groups: dict[tuple[int, int], dict[int, tuple]] = {}
        for (a, b, j, k), c in F.terms.items():
            g = groups.setdefault((a, b), {})
            g[j] = upoly.add(g.get(j, ()), upoly.monomial(c, k))
        root = None
        for (a, b), xt in sorted(groups.items()):
            if a and b:
                mono = self.binary("mul", self.power(self.leaf("P"), a), self.power(self.leaf("Q"), b))
            elif a:
                mono = self.power(self.leaf("P"), a)
            elif b:
                mono = self.power(self.leaf("Q"), b)
            else:
                mono = self.constant(1)
            term = self.scaled(mono, xt)
            root = term if root is None else self.binary("add", root, term)
        return root if root is not None else self.constant(0)

    # --- evaluation -----------------------------------------------------

    def run(self, n: int, p_n, q_n, first: bool) -> None:
        """Compute every node's x^n coefficient for the given P_n and Q_n.

        ``first`` must be True exactly once per order, before any other pass.
        """
        if first:
            if n != self.n + 1:
                raise ValueError("orders must be evaluated in sequence")
            self.n = n
            self.p.append(p_n)
            self.q.append(q_n)
        else:
            self.p[n] = p_n
            self.q[n] = q_n
        for node in self.nodes:
            if not first and not node.dynamic:
                continue
            val = self._coeff(node, n, first)
            if first:
                node.coeffs.append(val)
            else:
                node.coeffs[n] = val

    def finalize(self, n: int) -> None:
        for node in self.nodes:
            if node.coeffs[n]:
                node.nz.append(n)

    def value(self, idx: int, n: int):
        return self.nodes[idx].coeffs[n]

    def _coeff(self, node: _Node, n: int, first: bool):
        kind = node.kind
        if kind == "P":
            return self.p[n]
        if kind == "Q":
            return self.q[n]
        nodes = self.nodes
        if kind == "xt":
            return node.data.get(n, ())
        if kind == "add":
            return upoly.add(nodes[node.a].coeffs[n], nodes[node.b].coeffs[n])
        if kind == "sub":
            return upoly.sub(nodes[node.a].coeffs[n], nodes[node.b].coeffs[n])
        if kind == "neg":
            return upoly.neg(nodes[node.a].coeffs[n])
        if kind == "scal":
            s = nodes[node.a].coeffs
            if first:
                acc = ()
                for j, c in node.data.items():
                    if 1 <= j <= n and s[n - j]:
                        acc = upoly.add(acc, upoly.mul(c, s[n - j]))
                node.cache = acc
            c0 = node.data.get(0)
            if c0 and s[n]:
                return upoly.add(node.cache, upoly.mul(c0, s[n]))
            return node.cache
        if kind == "mul":
            A, B = nodes[node.a], nodes[node.b]
            ac, bc = A.coeffs, B.coeffs
            if n == 0:
                return upoly.mul(ac[0], bc[0])
            if first:
                acc = ()
                # iterate over the sparser factor's nonzero lower coefficients
                if len(A.nz) <= len(B.nz):
                    for i in A.nz:
                        if i == 0:
                            continue
                        b = bc[n - i]
                        if b:
                            acc = upoly.add(acc, upoly.mul(ac[i], b))
                else:
                    for i in B.nz:
                        if i == 0:
                            continue
                        a = ac[n - i]
                        if a:
                            acc = upoly.add(acc, upoly.mul(a, bc[i]))
                node.cache = acc
            out = node.cache
            if ac[0] and bc[n]:
                out = upoly.add(out, upoly.mul(ac[0], bc[n]))
            if bc[0] and ac[n]:
                out = upoly.add(out, upoly.mul(ac[n], bc[0]))
            return out
        if kind == "div":
            A, B = nodes[node.a], nodes[node.b]
            b0 = B.coeffs[0]
            if not b0:
                raise NotAUnit("denominator has zero constant term in x")
            if first:
                acc = ()
                for i in B.nz:
                    if 1 <= i < n:
                        d = node.coeffs[n - i]
                        if d:
                            acc = upoly.add(acc, upoly.mul(B.coeffs[i], d))
                node.cache = acc
            num = A.coeffs[n]
            if n:
                num = upoly.sub(num, node.cache)
                if B.coeffs[n] and node.coeffs[0]:
                    num = upoly.sub(num, upoly.mul(B.coeffs[n], node.coeffs[0]))
            try:
                return upoly.div_exact(num, b0)
            except DivisibilityFailure:
                raise DividedDifferenceFailure(n) from None
        raise ValueError(kind)


def compile_expression(e: Expr) -> tuple[OnlineEvaluator, int]:
    ev = OnlineEvaluator()
    return ev, ev.compile_expr(e)


def compile_polynomial(F: MultiPoly) -> tuple[OnlineEvaluator, int]:
    ev = OnlineEvaluator()
    return ev, ev.compile_poly(F)


def annihilation_order(G: MultiPoly, P, Q=None) -> int:
    """Evaluate G(P, Q, x, t) lazily; return the first order with a nonzero
    coefficient, or P.order + 1 when G vanishes through the available order."""
    ev, root = compile_polynomial(G)
    order = P.order if Q is None else min(P.order, Q.order)
    for n in range(order + 1):
        p_n = P.coeffs[n]
        q_n = (Q.coeffs[n] if Q is not None else ())
        if Q is not None and not isinstance(q_n, tuple):
            q_n = upoly.const(q_n)
        ev.run(n, p_n, q_n, first=True)
        ev.finalize(n)
        if ev.value(root, n):
            return n
    return order + 1


__all__ = ["OnlineEvaluator", "compile_expression", "compile_polynomial", "annihilation_order"]
