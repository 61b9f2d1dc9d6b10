"""
Reference genus-0 potentials of the polynomial orbicurves P1_{2,2,2}, P1_{2,2,3}, P1_{2,2,4}, P1_{2,3,3}
Q stands for e^s z; twisted variables follow orbicurve.twisted_name
"""

import logging
from typing import Dict, List, Tuple

from algebra.sparse_poly import SparsePoly
from orbigw.orbicurve import QUANTUM, Orbicurve, grading_and_euler
from orbigw.potential import GWPotential, classical_part

logger = logging.getLogger(__name__)

REFERENCE_POTENTIALS: Dict[Tuple[int, ...], str] = {
    (2, 2, 2): (
        "Q**4/4 + Q**2*(t1_1**2 + t2_1**2 + t3_1**2)/2 + Q*t1_1*t2_1*t3_1"
        " + t0*(t1_1**2 + t2_1**2 + t3_1**2)/4 - (t1_1**4 + t2_1**4 + t3_1**4)/96 + t0**2*s/2"
    ),
    (2, 2, 3): (
        "Q**6/6 + Q**4*t3_2**2/4 + Q**3*t1_1*t2_1 + Q**2*(t3_2**2/6 + t3_1)**2/2"
        " + Q**2*(t1_1**2 + t2_1**2)*t3_2/2 + Q*t1_1*t2_1*(t3_2**2/6 + t3_1)"
        " - t3_2**6/19440 + t3_1*t3_2**4/648 + t3_1**3/18 - t3_1**2*t3_2**2/36"
        " + t0*(t1_1**2 + t2_1**2)/4 - (t1_1**4 + t2_1**4)/96 + t0*t3_1*t3_2/3 + t0**2*s/2"
    ),
    (2, 2, 4): (
        "Q**8/8 + Q**6*t3_3**2/6 + Q**4*(t3_3**2/8 + t3_2/2)**2 + Q**4*(t1_1**2 + t2_1**2)/2"
        " + Q**3*t1_1*t2_1*t3_3 + Q**2*(t3_3**3/96 + t3_2*t3_3/4 + t3_1)**2/2"
        " + Q**2*(t1_1**2 + t2_1**2)*(t3_3**2/8 + t3_2/2)"
        " + Q*t1_1*t2_1*(t3_3**3/96 + t3_2*t3_3/4 + t3_1)"
        " - t3_3**8/4128768 + t3_2*t3_3**6/73728 - t3_1*t3_3**5/30720 - t3_2**4/192"
        " - t3_2**2*t3_3**4/3072 + t3_1*t3_2*t3_3**3/384 + t0*t3_2**2/8 + t3_2**3*t3_3**2/384"
        " - t3_1**2*t3_3**2/64 + t0*(t1_1**2 + t2_1**2)/4 - (t1_1**4 + t2_1**4)/96"
        " + t3_1**2*t3_2/8 - t3_1*t3_2**2*t3_3/32 + t0*t3_1*t3_3/4 + t0**2*s/2"
    ),
    (2, 3, 3): (
        "-t1_1**4/96 + Q**3*t1_1**3/3 + Q**6*t1_1**2/2 + t0*t1_1**2/4"
        " + Q**2*t2_2*t3_2*t1_1**2/2 + Q**5*t2_2*t3_2*t1_1"
        " + Q*(t2_2**2/6 + t2_1)*(t3_2**2/6 + t3_1)*t1_1"
        " + Q**3*(t2_2*(t2_2**2/6 + t2_1) + t3_2*(t3_2**2/6 + t3_1))*t1_1"
        " + Q**12/12 + Q**4*t2_2**2*t3_2**2/4 + (t2_1**3 + t3_1**3)/18 + Q**8*t2_2*t3_2/2"
        " + t0*(t2_1*t2_2 + t3_1*t3_2)/3 + Q**4*(t2_2**2/6 + t2_1)*(t3_2**2/6 + t3_1)"
        " - (t2_1**2*t2_2**2 + t3_1**2*t3_2**2)/36 + Q**6*(t2_2**3 + t3_2**3)/6"
        " + (t2_1*t2_2**4 + t3_1*t3_2**4)/648 - (t2_2**6 + t3_2**6)/19440"
        " + Q**2*(t3_2*(t2_2**2/6 + t2_1)**2 + t2_2*(t3_2**2/6 + t3_1)**2)/2 + t0**2*s/2"
    ),
}

# readings that differ from the printed source
CORRECTIONS: Dict[Tuple[int, ...], List[str]] = {
    (2, 2, 2): ["quartic coefficient -1/96; the printed +1/96 violates WDVV"],
}


def reference_orders() -> List[Tuple[int, ...]]:
    return sorted(REFERENCE_POTENTIALS)


def reference_polynomial(orders) -> SparsePoly:
    """Reference potential as a polynomial over (flat variables, Q)"""
    key = tuple(int(a) for a in orders)
    if key not in REFERENCE_POTENTIALS:
        raise KeyError(f"No reference potential for orders {key} (orders must be ascending)")
    grading = grading_and_euler(Orbicurve(0, key))
    return SparsePoly.from_expr(REFERENCE_POTENTIALS[key], grading.variables.all)


def reference_potential(orders) -> GWPotential:
    """Reference potential split into classical part, degree-zero terms and Q-degrees"""
    key = tuple(int(a) for a in orders)
    poly = reference_polynomial(key)
    curve = Orbicurve(0, key)
    grading = grading_and_euler(curve)
    variables = grading.variables.all
    classical = classical_part(grading, 0)
    quantum = {}
    a_terms = SparsePoly.zero(variables)
    for (d,), coeff in poly.collect([QUANTUM]).items():
        piece = coeff.with_variables(variables)
        if d == 0:
            a_terms = piece - classical
        else:
            quantum[d] = piece
    return GWPotential(
        orbicurve=curve,
        genus=0,
        grading=grading,
        classical=classical,
        a_terms=a_terms,
        quantum=quantum,
        truncation=None,
        flags=tuple(CORRECTIONS.get(key, ())),
    )


def difference_from_reference(potential: GWPotential) -> SparsePoly:
    """Assembled minus reference; zero when they agree term by term"""
    reference = reference_polynomial(potential.orbicurve.orders)
    diff = potential.to_poly() - reference
    if not diff.is_zero():
        logger.warning(f"{potential.orbicurve.name} differs from its reference in {len(diff.terms)} terms")
    return diff
