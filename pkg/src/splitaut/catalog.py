"""Catalog of newform orbits at levels p and p^2.

Orbits carry their Fricke sign, the characteristic polynomials of T_l, CM and
inner-twist flags and, when computed in-process, exact Hecke eigenvalues in
their coefficient field.  Twisting by the quadratic character of conductor p
permutes the orbits of New_{p^2} and New_p; the twist table, the set S, the
invariant t and the splitting-field classification are derived from it.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .decompose import ModularContext, eigen_decompose, hecke_eigen_data
from .exact.arith import class_number, is_prime, legendre, primes_up_to
from .exact.numberfield import NumberField
from .exact.poly import Poly
from .modsym import get_space

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class CatalogError(RuntimeError):
    pass


class InsufficientRange(CatalogError):
    pass


class TwistMatchError(CatalogError):
    pass


@dataclass(frozen=True)
class QuadraticCharacter:
    """The Legendre character mod p, attached to K = Q(sqrt(p*))."""

    p: int

    def __call__(self, n):
        return legendre(n % self.p, self.p) if n % self.p else 0

    @property
    def pstar(self):
        return self.p if self.p % 4 == 1 else -self.p

    @property
    def field_name(self):
        return f"Q(sqrt({self.pstar}))"


def sturm_bound(p):
    """ceil(mu/6) for Gamma_0(p^2), mu = p(p+1)."""
    return ceil(p * (p + 1) / 6)


@dataclass
class NewformOrbit:
    level: int
    dimension: int
    epsilon: int
    hecke_charpolys: dict  # l -> Poly
    field_poly: Poly = None
    eigen: dict = None  # l -> Poly, element of Q[x]/(field_poly)
    cm: bool = False
    inner_twist: bool = False
    label: str = ""

    @property
    def fingerprint(self):
        """Stable id: level, sign and charpolys of T_l for l <= 50."""
        data = [self.level, self.epsilon]
        for l in sorted(self.hecke_charpolys):
            if l <= 50:
                data.append([l, [str(c) for c in self.hecke_charpolys[l].coeffs]])
        return hashlib.sha256(json.dumps(data).encode()).hexdigest()[:16]

    def charpoly(self, l):
        if l not in self.hecke_charpolys:
            raise InsufficientRange(f"no T_{l} data for orbit {self.label}")
        return self.hecke_charpolys[l]

    @property
    def hecke_field(self):
        return NumberField(self.field_poly) if self.field_poly is not None else None


@dataclass
class Catalog:
    p: int
    ell_max: int
    orbits: list
    provenance: str = "computed"
    twist: dict = field(default_factory=dict)  # label -> label
    notes: list = field(default_factory=list)

    @property
    def chi(self):
        return QuadraticCharacter(self.p)

    @property
    def sturm(self):
        return sturm_bound(self.p)

    @property
    def ell_range(self):
        return max(self.ell_max, self.sturm)

    def by_label(self, label):
        for o in self.orbits:
            if o.label == label:
                return o
        raise KeyError(label)

    def level_orbits(self, level):
        return [o for o in self.orbits if o.level == level]

    def plus_orbits(self):
        """New^+_{p^2} together with New_p: the factors of J_0^+(p^2)."""
        p = self.p
        return [o for o in self.orbits if (o.level == p * p and o.epsilon == 1) or o.level == p]

    def plus_dimension(self):
        return sum(o.dimension for o in self.plus_orbits())

    def is_provisional(self):
        """Decisions made with fewer than Sturm-bound coefficients are provisional."""
        return any(max(o.hecke_charpolys, default=0) < largest_prime_upto(self.sturm) for o in self.orbits)


def largest_prime_upto(n):
    ps = primes_up_to(n)
    return ps[-1] if ps else 0


def twisted_charpoly(c, chi_l):
    """Charpoly of chi(l) * T_l given the charpoly c of T_l."""
    if chi_l == 1:
        return c
    if chi_l == -1:
        return c.twist()
    raise ValueError("twist only defined away from p")


def _label_orbits(orbits):
    letters = "abcdefghijklmnopqrstuvwxyz"
    for level in sorted({o.level for o in orbits}):
        group = [o for o in orbits if o.level == level]
        group.sort(key=lambda o: (o.dimension, o.epsilon, o.fingerprint))
        for i, o in enumerate(group):
            name = letters[i] if i < 26 else f"z{i}"
            o.label = f"{level}.{name}"


def build_catalog(p, ell_max=100, budget=100):
    """Compute the orbits of New_p and New_{p^2} with Hecke data up to max(ell_max, Sturm)."""
    if not is_prime(p) or p < 11:
        raise ValueError("build_catalog needs a prime p >= 11")
    L = max(ell_max, sturm_bound(p))
    ells = primes_up_to(L)
    orbits = []
    for level in (p, p * p):
        space = get_space(level)
        ctx = ModularContext(space, space.new_basis)
        for o in eigen_decompose(ctx, budget):
            eigen = hecke_eigen_data(ctx, o, ells)
            K = NumberField(o.field_poly)
            charpolys = {l: K.charpoly(eigen[l]) for l in ells}
            orbits.append(
                NewformOrbit(level, o.dimension, o.epsilon, charpolys, o.field_poly, eigen)
            )
    cat = Catalog(p, ell_max, orbits)
    finalize(cat)
    return cat


def finalize(cat):
    """Label orbits, then fill CM / inner-twist flags and the twist table."""
    _label_orbits(cat.orbits)
    cat.orbits.sort(key=lambda o: o.label)
    for o in cat.orbits:
        o.cm = detect_cm(o, cat.p, cat.sturm)
    for o in cat.orbits:
        o.inner_twist = False if o.cm else detect_inner_twist(o, cat.chi, cat.sturm)
    cat.twist = {o.label: twist_image(o, cat.chi, cat).label for o in cat.orbits}
    return cat


def _primes_to_bound(orbit, bound, p):
    ells = [l for l in primes_up_to(bound) if l != p]
    missing = [l for l in ells if l not in orbit.hecke_charpolys]
    if missing:
        raise InsufficientRange(f"orbit {orbit.label} lacks T_l for l in {missing[:5]}...")
    return ells


def detect_cm(orbit, p, bound):
    """CM by K: a_l = 0 for every l <= bound with chi(l) = -1 (only p = 3 mod 4, level p^2)."""
    ells = _primes_to_bound(orbit, bound, p)
    if p % 4 != 3 or orbit.level != p * p:
        return False
    x_d = Poly.monomial(orbit.dimension)
    return all(orbit.hecke_charpolys[l] == x_d for l in ells if legendre(l, p) == -1)


def detect_inner_twist(orbit, chi, bound):
    """f (x) chi Galois-conjugate to f, certified by charpolys up to `bound`."""
    if orbit.cm:
        raise ValueError("inner twists are only tested on orbits without CM")
    ells = _primes_to_bound(orbit, bound, chi.p)
    return all(twisted_charpoly(orbit.hecke_charpolys[l], chi(l)) == orbit.hecke_charpolys[l] for l in ells)


def twist_image(orbit, chi, catalog):
    """The unique orbit whose T_l charpolys are the chi-twists of those of `orbit`."""
    bound = catalog.sturm
    ells = _primes_to_bound(orbit, bound, chi.p)
    target = {l: twisted_charpoly(orbit.hecke_charpolys[l], chi(l)) for l in ells}
    hits = []
    for o in catalog.orbits:
        if o.dimension != orbit.dimension:
            continue
        if all(o.hecke_charpolys.get(l) == c for l, c in target.items()):
            hits.append(o)
    if len(hits) != 1:
        raise TwistMatchError(
            f"twist of {orbit.label} matched {len(hits)} orbits using l <= {bound}; extend the range"
        )
    return hits[0]


def cm_dimension(p):
    """Dimension g_c of the CM factor from quadratic residues in [1, (p-1)/2].

    Dirichlet's class number formula: h(-p) = (2V - (p-1)/2) / (2 - (2|p)),
    where V counts quadratic residues mod p in [1, (p-1)/2].  For p = 3 mod 8
    the denominator is 3.
    """
    if not is_prime(p) or p % 4 != 3:
        raise ValueError("cm_dimension needs a prime p = 3 mod 4")
    half = (p - 1) // 2
    V = sum(1 for n in range(1, half + 1) if legendre(n, p) == 1)
    num = 2 * V - half
    den = 2 - legendre(2, p)
    if num % den:
        raise ArithmeticError("class number formula did not give an integer")
    return num // den


def cm_dimension_over_three(p):
    """The same count with the fixed denominator 3 (valid when p = 3 mod 8)."""
    half = (p - 1) // 2
    V = sum(1 for n in range(1, half + 1) if legendre(n, p) == 1)
    return Fraction(2 * V - half, 3)


def compute_S_and_t(catalog):
    """The set S of plus-orbits whose endomorphism fields have only +-1 as roots of unity, and t."""
    p = catalog.p
    plus = {o.label for o in catalog.plus_orbits()}
    S = []
    for o in catalog.plus_orbits():
        if o.cm:
            if p % 8 == 3:
                S.append(o)
            continue
        if catalog.twist[o.label] not in plus:
            S.append(o)
    return S, sum(o.dimension for o in S)


def splitting_field(catalog):
    """'hilbert_class_field', 'K' or 'Q' for J_0^+(p^2)."""
    p = catalog.p
    if p % 8 == 3:
        return "hilbert_class_field"
    plus = {o.label for o in catalog.plus_orbits()}
    if any(catalog.twist[label] in plus for label in plus):
        return "K"
    return "Q"


def catalog_summary(catalog):
    S, t = compute_S_and_t(catalog)
    return {
        "p": catalog.p,
        "provenance": catalog.provenance,
        "sturm_bound": catalog.sturm,
        "ell_range": catalog.ell_range,
        "orbits": [
            {
                "label": o.label,
                "level": o.level,
                "dimension": o.dimension,
                "epsilon": o.epsilon,
                "cm": o.cm,
                "inner_twist": o.inner_twist,
                "twist": catalog.twist.get(o.label),
                "charpoly_T2": o.hecke_charpolys[2].to_text() if 2 in o.hecke_charpolys else None,
            }
            for o in catalog.orbits
        ],
        "new_counts": {str(lv): len(catalog.level_orbits(lv)) for lv in (catalog.p, catalog.p**2)},
        "plus_count_p2": sum(1 for o in catalog.level_orbits(catalog.p**2) if o.epsilon == 1),
        "g_plus": catalog.plus_dimension(),
        "S": [o.label for o in S],
        "t": t,
        "splitting_field": splitting_field(catalog),
        "class_number_check": _class_number_check(catalog),
    }


def _class_number_check(catalog):
    p = catalog.p
    if p % 4 != 3:
        return None
    cm = [o for o in catalog.orbits if o.cm]
    return {
        "g_c": cm_dimension(p),
        "class_number": class_number(-p),
        "cm_orbit_dimension": cm[0].dimension if len(cm) == 1 else None,
    }


# -- persistence ---------------------------------------------------------

SCHEMA_NAME = "splitaut.newform-catalog"


def _poly_out(f):
    return [str(c) for c in f.coeffs]


def _poly_in(data):
    return Poly([Fraction(c) for c in data])


def catalog_to_json(cat):
    """Self-describing record; integers and rationals are written as decimal strings."""
    return {
        "schema": SCHEMA_NAME,
        "version": SCHEMA_VERSION,
        "p": cat.p,
        "ell_max": cat.ell_max,
        "provenance": cat.provenance,
        "orbits": [
            {
                "label": o.label,
                "level": o.level,
                "dimension": o.dimension,
                "epsilon": o.epsilon,
                "fingerprint": o.fingerprint,
                "cm": o.cm,
                "inner_twist": o.inner_twist,
                "field_poly": _poly_out(o.field_poly) if o.field_poly is not None else None,
                "hecke_charpolys": {str(l): _poly_out(c) for l, c in sorted(o.hecke_charpolys.items())},
                "eigen": {str(l): _poly_out(g) for l, g in sorted(o.eigen.items())} if o.eigen else None,
            }
            for o in cat.orbits
        ],
        "twist": dict(sorted(cat.twist.items())),
    }


def catalog_from_json(data):
    """Rebuild a catalog; flags and the twist table are recomputed and must agree with the record."""
    if data.get("schema") != SCHEMA_NAME:
        raise CatalogError("not a newform catalog record")
    if data.get("version") != SCHEMA_VERSION:
        raise CatalogError(f"unsupported catalog version {data.get('version')}")
    if not data.get("provenance"):
        raise CatalogError("catalog record lacks a provenance field")
    p = int(data["p"])
    orbits = []
    for rec in data["orbits"]:
        level = int(rec["level"])
        if level not in (p, p * p):
            raise CatalogError(f"orbit level {level} is not {p} or {p * p}")
        charpolys = {int(l): _poly_in(c) for l, c in rec["hecke_charpolys"].items()}
        dim = int(rec["dimension"])
        if any(c.degree != dim or not c.is_monic() or not c.is_integral() for c in charpolys.values()):
            raise CatalogError(f"orbit {rec.get('label')}: charpolys must be monic integral of degree {dim}")
        eps = int(rec["epsilon"])
        if eps not in (1, -1):
            raise CatalogError("epsilon must be +1 or -1")
        orbits.append(
            NewformOrbit(
                level,
                dim,
                eps,
                charpolys,
                _poly_in(rec["field_poly"]) if rec.get("field_poly") else None,
                {int(l): _poly_in(g) for l, g in rec["eigen"].items()} if rec.get("eigen") else None,
            )
        )
    cat = Catalog(p, int(data.get("ell_max", 100)), orbits, provenance=data["provenance"])
    finalize(cat)
    stated = {rec["label"]: rec for rec in data["orbits"] if "label" in rec}
    for o in cat.orbits:
        rec = stated.get(o.label)
        if rec is None:
            continue
        for flag in ("cm", "inner_twist"):
            if flag in rec and bool(rec[flag]) != getattr(o, flag):
                raise CatalogError(f"orbit {o.label}: recorded {flag} disagrees with the Hecke data")
    return cat


def cache_dir():
    import os
    from pathlib import Path

    return Path(os.environ.get("SPLITAUT_CACHE", Path.home() / ".cache" / "splitaut"))


def save_catalog(cat, path):
    """Atomic write: temp file in the same directory, then rename."""
    import os
    import tempfile
    from pathlib import Path

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(catalog_to_json(cat), fh, indent=1, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_catalog(path):
    with open(path) as fh:
        return catalog_from_json(json.load(fh))


def import_catalog(path, source):
    """Load externally supplied newform data; it is tagged as imported, never as computed."""
    with open(path) as fh:
        data = json.load(fh)
    prov = data.get("provenance")
    if not prov:
        raise CatalogError("imported records must carry a provenance field")
    if not str(prov).startswith("imported"):
        data["provenance"] = f"imported:{source}:{prov}"
    return catalog_from_json(data)


def get_catalog(p, ell_max=100, use_cache=True):
    """Computed catalog for p, served from the cache directory when a fresh enough copy exists."""
    path = cache_dir() / f"catalog-{p}.json"
    need = max(ell_max, sturm_bound(p))
    if use_cache and path.exists():
        try:
            cat = load_catalog(path)
            if cat.provenance == "computed" and cat.ell_range >= need:
                return cat
        except (CatalogError, ValueError, KeyError) as exc:
            log.warning("ignoring unreadable cache %s: %s", path, exc)
    cat = build_catalog(p, ell_max)
    if use_cache:
        try:
            save_catalog(cat, path)
        except OSError as exc:
            log.warning("could not write cache %s: %s", path, exc)
    return cat
