"""Parsing of the JSON request formats used by the command line."""

from __future__ import annotations

from fractions import Fraction

from .exactfield import Field, _ExtensionField, field_make
from .groups import GL, G2, O, SL, SO, SU, Projective, Sp, U, GroupSpec, standard_forms
from .matlin import Mat


class MalformedInput(ValueError):
    pass


def value_from_json(F: Field, v):
    """Value strings ("3", "-1/2") or, for extensions, nested coordinate lists."""
    if isinstance(v, list):
        if not isinstance(F, _ExtensionField):
            raise MalformedInput(f"coordinate list given for {F.name}")
        return F.coerce([value_from_json(F.base, c) for c in v])
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise MalformedInput(f"bad value {v!r}")
    try:
        return F.coerce(Fraction(v))
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad value {v!r}: {exc}") from None


def mat_from_json(d, field: Field | None = None) -> Mat:
    if not isinstance(d, dict) or "entries" not in d:
        raise MalformedInput("matrix JSON needs 'entries'")
    F = field_make(d["field"]) if "field" in d else field
    if F is None:
        raise MalformedInput("matrix JSON needs a field descriptor")
    rows = d["entries"]
    if not isinstance(rows, list) or not rows or len({len(r) for r in rows}) != 1:
        raise MalformedInput("entries must be a non-empty rectangular array")
    if "rows" in d and d["rows"] != len(rows):
        raise MalformedInput("'rows' disagrees with entries")
    return Mat._raw(F, [[value_from_json(F, x) for x in r] for r in rows])


_FORM_KIND = {"O": "symmetric-split", "SO": "symmetric-split", "Sp": "alternating", "U": "hermitian", "SU": "hermitian"}
_CTOR = {"O": O, "SO": SO, "Sp": Sp, "U": U, "SU": SU}


def spec_from_json(d) -> GroupSpec:
    """Accepts a gram matrix, or field + n for GL/SL/G2 and for the standard forms."""
    if not isinstance(d, dict) or "kind" not in d:
        raise MalformedInput("group spec needs 'kind'")
    kind = d["kind"]
    if kind == "Projective":
        return Projective(spec_from_json(d["inner"]))
    if kind == "PSL2":
        return Projective(SL(field_make(d["field"]), 2))
    if kind in ("GL", "SL"):
        return (GL if kind == "GL" else SL)(field_make(d["field"]), int(d["n"]))
    if kind == "G2":
        return G2(field_make(d["field"]))
    if kind in _CTOR:
        if "gram" in d:
            gram = mat_from_json(d["gram"])
        else:
            F = field_make(d["field"])
            gram = standard_forms(d.get("form", _FORM_KIND[kind]), int(d["n"]), F).gram
        return _CTOR[kind](gram)
    raise MalformedInput(f"unknown group kind {kind!r}")


def request_from_json(d):
    """(spec, element, hint) for group requests; quaternion requests return a QuaternionGroup spec."""
    if not isinstance(d, dict) or "spec" not in d or "element" not in d:
        raise MalformedInput("request needs 'spec' and 'element'")
    s = d["spec"]
    if isinstance(s, dict) and s.get("kind") == "Quaternion":
        from .cayley import Quaternion, QuaternionGroup

        F = field_make(s["field"])
        a, b = value_from_json(F, s["a"]), value_from_json(F, s["b"])
        el = d["element"]
        if not isinstance(el, list) or len(el) != 4:
            raise MalformedInput("quaternion element is a list of 4 coordinates")
        x = Quaternion.make(F, a, b, [value_from_json(F, c) for c in el])
        return QuaternionGroup(F, a, b, s.get("group", "Units")), x, None
    spec = spec_from_json(s)
    t = mat_from_json(d["element"], spec.field)
    hint = mat_from_json(d["hint"], spec.field) if d.get("hint") is not None else None
    return spec, t, hint


