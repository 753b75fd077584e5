"""
Wick Demo Command
=================

Evaluates a user-supplied monomial against a pairing through the contraction
operator and cross-checks it with the brute-force matching sum. Optional
sections exercise the Berezin engine.

Input JSON:
    {
      "generators": [{"id": 0, "degree": 0, "name": "x"}, ...],
      "monomial": ["x", "y", "x", "y"],          # names or ids, in product order
      "coefficient": 1,
      "pairing": [[1, 0], [0, 2]],               # matrix over "generators"
      "berezin": [[1, 2], [3, 4]],               # optional: ∫e^{-ω*Bω} vs det B
      "pfaffian": [[0, 1], [-1, 0]],             # optional: Pf² vs det
      "two_point": {"B": [[2]], "i": 0, "j": 0}  # optional: fermionic ⟨ω_i ω*_j⟩
    }

Integers and "p/q" strings stay exact; floats stay floats.

Sample Input:
    handle_wick_demo({"spec": {"generators": ["a", "b", "c", "d"],
                               "monomial": ["a", "b", "c", "d"],
                               "pairing": [[1, 1, 1, 1]] * 4}})

Expected Output:
    wick_expectation == matching_sum == 3
"""

from pathlib import Path
from typing import Any, Dict, List

import numpy as np
from loguru import logger

from ..core.errors import InvalidParameterError
from ..core.utils import load_json_file, parse_fraction
from ..core.wick import (
    Generator,
    GradedExpr,
    PairingKernel,
    berezin_gaussian,
    fermionic_pairing,
    fermionic_two_point,
    matching_sum,
    pfaffian_gaussian,
    wick_expectation,
)
from .reports import Report, measured

EXACT_TOL = 1e-12
MATRIX_TOL = 1e-10


def _coefficient(value: Any):
    if isinstance(value, float):
        return value
    try:
        return parse_fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidParameterError(f"Not a coefficient: {value!r}") from e


def _generators(raw: List[Any]) -> List[Generator]:
    gens = []
    for index, item in enumerate(raw):
        if isinstance(item, str):
            gens.append(Generator(index, 0, item))
        else:
            gens.append(Generator(int(item.get("id", index)), int(item.get("degree", 0)), str(item.get("name", ""))))
    return gens


def _lookup(gens: List[Generator], ref: Any) -> Generator:
    for g in gens:
        if (isinstance(ref, str) and g.name == ref) or (isinstance(ref, int) and g.id == ref):
            return g
    raise InvalidParameterError(f"monomial refers to an unknown generator {ref!r}")


def _load(arguments: Dict[str, Any]) -> Dict[str, Any]:
    if arguments.get("spec") is not None:
        return arguments["spec"]
    if arguments.get("input"):
        return load_json_file(Path(arguments["input"]))
    raise InvalidParameterError("wick-demo needs an input JSON file")


def handle_wick_demo(arguments: Dict[str, Any]) -> Report:
    """Contraction-operator expectation of a monomial plus optional Berezin checks."""
    logger.info(f"wick-demo request received with arguments: {arguments}")
    spec = _load(arguments)
    report = Report("wick-demo", inputs=spec)

    if "monomial" in spec:
        gens = _generators(spec.get("generators") or [])
        word = [_lookup(gens, ref) for ref in spec["monomial"]]
        matrix = [[_coefficient(x) for x in row] for row in spec.get("pairing", [])]
        pairing = PairingKernel.from_matrix(gens, np.array(matrix, dtype=object).reshape(len(gens), len(gens)))

        expr = GradedExpr.monomial(*word, coeff=_coefficient(spec.get("coefficient", 1)))
        value = wick_expectation(expr, pairing)
        report.results["wick_expectation"] = measured(value, 0.0, kind="exact")
        report.results["graded_symmetric_pairing"] = pairing.is_graded_symmetric()
        report.add_row("wick_expectation", float(value), 0.0)

        distinct = len({g.id for g in word}) == len(word)
        if distinct and not any(g.is_odd for g in word):
            brute = matching_sum(word, pairing) * _coefficient(spec.get("coefficient", 1))
            report.results["matching_sum"] = measured(brute, 0.0, kind="exact")
            report.add_check("contraction_vs_matchings", ("wick_expectation", "matching_sum"),
                             value, brute, EXACT_TOL)
            report.add_row("matching_sum", float(brute), 0.0)

    if spec.get("berezin") is not None:
        B = np.asarray(spec["berezin"], dtype=float)
        berezin, det = berezin_gaussian(B), float(np.linalg.det(B))
        report.results["berezin"] = {"integral": measured(berezin, MATRIX_TOL), "det": det}
        report.add_check("berezin_vs_det", ("berezin_gaussian", "numpy.linalg.det"), berezin, det,
                         MATRIX_TOL * max(1.0, abs(det)))
        report.add_row("berezin_gaussian", berezin, MATRIX_TOL)

    if spec.get("pfaffian") is not None:
        A = np.asarray(spec["pfaffian"], dtype=float)
        pf, det = pfaffian_gaussian(A), float(np.linalg.det(A))
        report.results["pfaffian"] = {"pfaffian": measured(pf, MATRIX_TOL), "det": det}
        report.add_check("pfaffian_squared_vs_det", ("pfaffian_gaussian", "numpy.linalg.det"), pf * pf, det,
                         MATRIX_TOL * max(1.0, abs(det)))
        report.add_row("pfaffian_gaussian", pf, MATRIX_TOL)

    if spec.get("two_point") is not None:
        tp = spec["two_point"]
        B = np.asarray(tp["B"], dtype=float)
        i, j = int(tp.get("i", 0)), int(tp.get("j", 0))
        berezin = fermionic_two_point(B, i, j)
        pairing, omega, omega_star = fermionic_pairing(B)
        contracted = float(wick_expectation(GradedExpr.monomial(omega[i], omega_star[j]), pairing))
        inverse = float(np.linalg.inv(B)[i, j])
        report.results["two_point"] = {
            "berezin": measured(berezin, MATRIX_TOL),
            "contraction": measured(contracted, MATRIX_TOL),
            "inverse_entry": inverse,
        }
        report.add_check("two_point_berezin_vs_inverse", ("fermionic_two_point", "numpy.linalg.inv"),
                         berezin, inverse, MATRIX_TOL * max(1.0, abs(inverse)))
        report.add_check("two_point_contraction_vs_inverse", ("wick_expectation", "numpy.linalg.inv"),
                         contracted, inverse, MATRIX_TOL * max(1.0, abs(inverse)))
        report.add_row("fermionic_two_point", berezin, MATRIX_TOL, i=i, j=j)

    if not report.results:
        raise InvalidParameterError("wick-demo input has no monomial, berezin, pfaffian or two_point section")
    return report
