"""Print the worked examples: C^2, M_2 (E12 and diag(1, i)), open quadrant, halfplane."""
import math
from fractions import Fraction

import numpy as np

from ordspace import arch, norms, order
from ordspace import cone as cn
from ordspace.cone import OrderedSpace, h_cone, open_orthant, orthant_space, psd_space
from ordspace.core import ComplexElement, fmt_scalar, fmt_vector
from ordspace.matrix import split


def show(label, iv):
    if isinstance(iv, norms.MinimalNorm):
        extra = f" (square {fmt_scalar(iv.squared)})" if iv.squared is not None else ""
        print(f"  {label:<4} = {iv.value:.10f}{extra}")
    else:
        print(f"  {label:<4} in [{float(iv.lower):.10f}, {float(iv.upper):.10f}]  {iv.status}")


def matrix_element(X):
    x, y = split(np.asarray(X, dtype=complex))
    return ComplexElement(x, y)


def main():
    print("C^2 with the orthant cone, e = (1, 1), v = (1, i)")
    sp = orthant_space(2)
    v = ComplexElement((1, 0), (0, 1))
    show("m", norms.minimal_norm(sp, v))
    show("dec", norms.decomposition_norm(sp, v, 1e-6))
    show("M", norms.maximal_norm(sp, v, 1e-6))
    print(f"  sqrt 2 = {math.sqrt(2):.10f}")

    m2 = psd_space(2)
    for name, X in (("E12", [[0, 1], [0, 0]]), ("diag(1, i)", np.diag([1, 1j]))):
        print(f"M_2 with the PSD cone, v = {name}")
        w = matrix_element(X)
        show("m", norms.minimal_norm(m2, w))
        show("dec", norms.decomposition_norm(m2, w))
        show("M", norms.maximal_norm(m2, w))

    print("Open quadrant {x > 0, y > 0} u {0}, e = (1, 1)")
    oq = OrderedSpace(open_orthant(2), (1, 1))
    rep = order.validate_space(oq)
    print(f"  valid = {rep['valid']}, Archimedean = {rep['archimedean']}")
    h = (1, 0)
    rs = [Fraction(1, 10**k) for k in range(6)]
    print(f"  (1, 0) in cone: {cn.member(oq.cone, h)}; r e + (1, 0) in cone for r = 1 ... 1e-5: "
          f"{all(cn.member(oq.cone, (r + 1, r)) for r in rs)}")
    res = arch.archimedeanize(oq)
    print(f"  Archimedeanization: identity projection = {res.is_identity}, closed = {cn.is_closed(res.space.cone)}")

    print("Halfplane {x > 0} u {0}, e = (1, 0)")
    hp = OrderedSpace(h_cone([(1, 0)], strict=[True]), (1, 0))
    res = arch.archimedeanize(hp)
    print(f"  N = span{[fmt_vector(k) for k in res.kernel]}, quotient dimension {res.space.n}, unit {fmt_vector(res.space.unit)}")
    print(f"  1 >= 0: {cn.member(res.space.cone, (1,))}, -1 >= 0: {cn.member(res.space.cone, (-1,))}")
    w = ComplexElement((1, 5), (0, 3))
    show("M", norms.maximal_norm(hp, w))


if __name__ == "__main__":
    main()
