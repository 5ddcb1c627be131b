import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from app.builders import (
    annulus_pair,
    diagonal_lattice,
    e8,
    e8_simple_roots_in,
    milnor_J,
    torus_block,
    witness_six,
)
from app.certify import certify_cvl
from app.config import CSV_DIR
from app.errors import EmptyInput, LatticeError, NotAnIsometry
from app.formats import LatticeFile, lattice_file
from app.isometry_spinor import cartan_dieudonne, o_prime_f_report
from app.jfamily import scan_polydisc
from app.lattice_core import (
    Lattice,
    LatticeVector,
    determinant,
    is_unimodular,
    preserves_form,
    signature,
)
from app.schemas import Report
from app.symplectic import closure_mod_p, sp_order, standard_generators, standard_symplectic

logger = logging.getLogger(__name__)

# JSON numbers in reports are exact integers; rationals and floats travel as strings

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3

BUILD_NAMES = ("diagonal", "e8", "torus", "annulus", "milnorJ", "witness")


def fraction_text(x: Fraction):
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


def float_text(x: float) -> str:
    return f"{x:.11e}"


def render(report: Report) -> str:
    return json.dumps(report.model_dump(), indent=2) + "\n"


def error_report(command: str, inputs: Dict, exc: LatticeError) -> Report:
    return Report(
        command=command,
        inputs=inputs,
        result={"error": type(exc).__name__, "message": str(exc)},
    )


# -------------------------------------------------------
# build
# -------------------------------------------------------

def build_named(
    name: str,
    entries: Optional[Sequence[int]] = None,
    q: int = 1,
    g: int = 0,
    chi: int = 1,
) -> Tuple[Lattice, Dict[str, LatticeVector]]:
    if name == "diagonal":
        if not entries:
            raise EmptyInput("diagonal needs --entries")
        return diagonal_lattice(list(entries)), {}

    if name == "e8":
        L = e8()
        return L, {f"n{i + 1}": v for i, v in enumerate(e8_simple_roots_in(8))}

    if name == "torus":
        return torus_block(q), {}

    if name == "annulus":
        L, s_plus, s_minus = annulus_pair(g)
        f = tuple(a + b for a, b in zip(s_plus, s_minus))
        return L, {"s_plus": s_plus, "s_minus": s_minus, "f": f}

    if name == "milnorJ":
        L = milnor_J(chi)
        return L, {f"e{i + 1}": L.basis_vector(i) for i in range(L.rank)}

    if name == "witness":
        witness = witness_six()
        L = witness.ambient
        vectors = {f"n{i + 1}": v for i, v in enumerate(e8_simple_roots_in(L.rank))}
        vectors.update({f"w{i + 1}": v for i, v in enumerate(witness.vectors)})
        return L, vectors

    raise LatticeError(f"unknown lattice {name!r}, expected one of {', '.join(BUILD_NAMES)}")


def build_inputs(name: str, entries=None, q: int = 1, g: int = 0, chi: int = 1) -> Dict:
    params = {"diagonal": {"entries": list(entries or [])}, "torus": {"q": q}, "annulus": {"g": g}, "milnorJ": {"chi": chi}}
    return {"name": name, **params.get(name, {})}


def build_report(name: str, entries=None, q: int = 1, g: int = 0, chi: int = 1) -> Tuple[int, Report]:
    L, vectors = build_named(name, entries=entries, q=q, g=g, chi=chi)
    sig = signature(L)
    result = {
        "label": L.label,
        "rank": L.rank,
        "gram": [list(row) for row in L.gram],
        "vectors": {k: list(v) for k, v in vectors.items()},
        "signature": list(sig.as_tuple()),
        "determinant": determinant(L),
        "is_even": L.is_even,
        "is_unimodular": is_unimodular(L),
    }
    report = Report(command="build", inputs=build_inputs(name, entries, q, g, chi), result=result)
    return EXIT_OK, report


def build_file(name: str, entries=None, q: int = 1, g: int = 0, chi: int = 1) -> Tuple[LatticeFile, str]:
    L, vectors = build_named(name, entries=entries, q=q, g=g, chi=chi)
    return lattice_file(L, vectors), L.label


# -------------------------------------------------------
# certify
# -------------------------------------------------------

def certify_report(lf: LatticeFile, height: int, max_size: int) -> Tuple[int, Report]:
    L = lf.lattice()
    seeds = [(name, v) for name, v in lf.vectors if name != "f"]
    if not seeds:
        raise EmptyInput("lattice file has no seed vectors")

    cert = certify_cvl(L, [v for _, v in seeds], height_bound=height, max_size=max_size)
    result = {
        "generates": cert.generates,
        "spanned_rank": cert.spanned_rank,
        "elementary_divisors": list(cert.elementary_divisors),
        "single_orbit": cert.single_orbit.value,
        "single_orbit_source": cert.single_orbit_source,
        "witness": [list(v) for v in cert.witness] if cert.witness is not None else None,
        "exhausted": cert.exhausted,
        "complete": cert.complete,
    }
    budget = {
        "height_bound": cert.budget.height_bound,
        "max_size": cert.budget.max_size,
        "frontier_peak": cert.budget.frontier_peak,
        "size": cert.budget.size,
    }
    inputs = {"rank": lf.rank, "seeds": [name for name, _ in seeds], "height": height, "max_size": max_size}
    code = EXIT_BUDGET if not cert.exhausted and not cert.complete else EXIT_OK
    return code, Report(command="certify", inputs=inputs, result=result, budget=budget)


# -------------------------------------------------------
# spinor
# -------------------------------------------------------

def spinor_report(lf: LatticeFile, M: Sequence[Sequence[int]]) -> Tuple[int, Report]:
    L = lf.lattice()
    f = lf.named().get("f")
    if f is None:
        if not preserves_form(L, M):
            raise NotAnIsometry("Matrix does not preserve the Gram form")
        report = o_prime_f_report(L, M, L.zero())
    else:
        report = o_prime_f_report(L, M, f)

    result = {
        "preserves_form": report.preserves_form,
        "spinor_norm": report.spinor_norm,
        "radical_rank": report.radical_rank,
    }
    if f is not None:
        result["fixes_f"] = report.fixes_f
        result["in_O_prime_f"] = report.member
    if report.preserves_form and report.radical_rank == 0:
        factorization = cartan_dieudonne(L, M)
        result["reflections"] = [[fraction_text(c) for c in v] for v in factorization.vectors]
        result["positive_reflections"] = factorization.sign_count

    inputs = {"rank": lf.rank, "marked_f": f is not None}
    return EXIT_OK, Report(command="spinor", inputs=inputs, result=result)


# -------------------------------------------------------
# sp-gen
# -------------------------------------------------------

def sp_gen_report(q: int, p: int, with_sums: bool = True) -> Tuple[int, Report]:
    S = standard_symplectic(q)
    generators = standard_generators(S, with_sums=with_sums)
    order = closure_mod_p(S, generators, p)
    expected = sp_order(q, p)
    inputs = {"q": q, "p": p, "with_sums": with_sums, "generators": len(generators)}
    result = {"order": order, "expected": expected, "match": order == expected}
    return EXIT_OK, Report(command="sp-gen", inputs=inputs, result=result)


# -------------------------------------------------------
# jscan
# -------------------------------------------------------

def csv_destination(csv: str) -> Path:
    path = Path(csv)
    if path.parent == Path("."):
        path = CSV_DIR / path
    return path


def jscan_report(chi: int, radius: float, samples: int, seed: int, csv: Optional[str] = None) -> Tuple[int, Report]:
    summary = scan_polydisc(chi, radius, samples, seed)
    written = summary.write_csv(csv_destination(csv)) if csv else None
    inputs = {"chi": chi, "radius": float_text(radius), "samples": samples, "seed": seed}
    result = {
        "min_nonzero_modulus": float_text(summary.min_nonzero_modulus),
        "max_bounded_modulus": float_text(summary.max_bounded_modulus),
        "pole_samples": summary.pole_samples,
        "max_residual": float_text(summary.max_residual),
        "analytic_bound": float_text(summary.analytic_bound),
        "bound_holds": summary.bound_holds,
        "degree": 12 * chi,
        "csv": str(written) if written else None,
    }
    return EXIT_OK, Report(command="jscan", inputs=inputs, result=result)


def parse_entries(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise LatticeError(f"entries must be comma separated integers, got {text!r}")
