"""Attribute schemas, option catalogs, file formats, and random generation.

Catalogs are immutable after construction and validate every option against
the declared schema. Two interchange formats are supported:

* JSON: ``{"schema": [{name, kind, lo?, hi?, discrete?, values?,
  prior_weight?, value_prior?}], "options": [{"id": ..., "values": {...}}]}``
* CSV: a metadata header row (first cell ``id``, then one
  ``name:kind[:lo:hi | :v1|v2|...]`` cell per attribute) followed by one row
  per option. Kind tokens are ``numeric``, ``integer`` (discrete numeric)
  and ``qualitative``. The CSV form cannot carry priors; they default.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import IO, Any, Iterable, Mapping

import numpy as np

QUALITATIVE = "qualitative"
NUMERIC = "numeric"


class CatalogError(Exception):
    """Base class for catalog construction and parsing problems."""


class SchemaError(CatalogError):
    """Invalid attribute schema or generation spec."""


class ValidationError(CatalogError):
    """An option does not satisfy the schema."""


class ParseError(CatalogError):
    """Malformed catalog file; carries the offending position in the message."""


@dataclass(frozen=True)
class AttributeSchema:
    """One attribute: a qualitative label set or a numeric interval.

    ``prior_weight`` is the probability that a user holds a hidden preference
    on this attribute; ``value_prior`` optionally replaces the uniform
    distribution over qualitative values when scoring hidden preferences.
    """

    name: str
    kind: str
    lo: float | None = None
    hi: float | None = None
    discrete: bool = False
    values: tuple[str, ...] | None = None
    prior_weight: float = 0.5
    value_prior: Mapping[str, float] | None = None

    def __post_init__(self):
        if not self.name:
            raise SchemaError("attribute name must be non-empty")
        if self.kind == NUMERIC:
            if self.lo is None or self.hi is None:
                raise SchemaError(f"{self.name}: numeric attribute needs lo and hi")
            if not self.lo < self.hi:
                raise SchemaError(f"{self.name}: need lo < hi, got [{self.lo}, {self.hi}]")
            if self.values is not None:
                raise SchemaError(f"{self.name}: numeric attribute cannot list values")
        elif self.kind == QUALITATIVE:
            if not self.values:
                raise SchemaError(f"{self.name}: qualitative attribute needs values")
            if len(set(self.values)) != len(self.values):
                raise SchemaError(f"{self.name}: duplicate qualitative values")
            if self.lo is not None or self.hi is not None:
                raise SchemaError(f"{self.name}: qualitative attribute cannot have bounds")
        else:
            raise SchemaError(f"{self.name}: unknown kind {self.kind!r}")
        if not 0.0 <= self.prior_weight <= 1.0:
            raise SchemaError(f"{self.name}: prior_weight must be in [0, 1]")
        if self.value_prior is not None:
            if self.kind != QUALITATIVE:
                raise SchemaError(f"{self.name}: value_prior only applies to qualitative attributes")
            if set(self.value_prior) - set(self.values or ()):
                raise SchemaError(f"{self.name}: value_prior names unknown values")
            total = sum(self.value_prior.values())
            if abs(total - 1.0) > 1e-9:
                raise SchemaError(f"{self.name}: value_prior sums to {total}, expected 1")
            object.__setattr__(self, "value_prior", dict(self.value_prior))
        if self.values is not None:
            object.__setattr__(self, "values", tuple(self.values))

    @staticmethod
    def numeric(name: str, lo: float, hi: float, *, discrete: bool = False,
                prior_weight: float = 0.5) -> "AttributeSchema":
        return AttributeSchema(name=name, kind=NUMERIC, lo=float(lo), hi=float(hi),
                               discrete=discrete, prior_weight=prior_weight)

    @staticmethod
    def qualitative(name: str, values: Iterable[str], *, prior_weight: float = 0.5,
                    value_prior: Mapping[str, float] | None = None) -> "AttributeSchema":
        return AttributeSchema(name=name, kind=QUALITATIVE, values=tuple(values),
                               prior_weight=prior_weight, value_prior=value_prior)

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    @property
    def range(self) -> float:
        """Width of the declared numeric domain."""
        if not self.is_numeric:
            raise TypeError(f"{self.name}: range is undefined for qualitative attributes")
        return float(self.hi) - float(self.lo)  # type: ignore[arg-type]

    def uniform_value_prior(self) -> dict[str, float]:
        """The effective prior over qualitative values (explicit or uniform)."""
        if not self.values:
            raise TypeError(f"{self.name}: not a qualitative attribute")
        if self.value_prior is not None:
            return {v: self.value_prior.get(v, 0.0) for v in self.values}
        p = 1.0 / len(self.values)
        return {v: p for v in self.values}

    def check_value(self, value: Any, option_id: str) -> Any:
        """Validate and normalize one option value for this attribute."""
        if self.is_numeric:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(
                    f"option {option_id!r}, attribute {self.name!r}: expected a number, got {value!r}")
            value = float(value)
            if not (self.lo <= value <= self.hi):  # type: ignore[operator]
                raise ValidationError(
                    f"option {option_id!r}, attribute {self.name!r}: {value} outside [{self.lo}, {self.hi}]")
            return value
        if value not in (self.values or ()):
            raise ValidationError(
                f"option {option_id!r}, attribute {self.name!r}: {value!r} not in {list(self.values or ())}")
        return value


@dataclass(frozen=True)
class OptionRecord:
    """One catalog option: a stable id plus one value per schema attribute."""

    id: str
    values: Mapping[str, Any]

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))

    def __getitem__(self, attr: str) -> Any:
        return self.values[attr]


class Catalog:
    """An immutable option set over a fixed attribute schema."""

    def __init__(self, schema: Iterable[AttributeSchema], options: Iterable[OptionRecord]):
        self.schema: tuple[AttributeSchema, ...] = tuple(schema)
        self.options: tuple[OptionRecord, ...] = tuple(options)
        if not self.schema:
            raise SchemaError("catalog needs at least one attribute")
        names = [a.name for a in self.schema]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate attribute names in schema")
        self._by_name = {a.name: a for a in self.schema}
        seen: set[str] = set()
        for opt in self.options:
            if opt.id in seen:
                raise ValidationError(f"duplicate option id {opt.id!r}")
            seen.add(opt.id)
            extra = set(opt.values) - set(names)
            missing = set(names) - set(opt.values)
            if extra or missing:
                raise ValidationError(
                    f"option {opt.id!r}: values must cover the schema exactly "
                    f"(missing {sorted(missing)}, extra {sorted(extra)})")
            for attr in self.schema:
                opt.values[attr.name] = attr.check_value(opt.values[attr.name], opt.id)  # type: ignore[index]
        self._index = {opt.id: i for i, opt in enumerate(self.options)}
        self._columns: dict[str, np.ndarray] = {}

    @property
    def n(self) -> int:
        return len(self.options)

    @property
    def k(self) -> int:
        return len(self.schema)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(opt.id for opt in self.options)

    def attribute(self, name: str) -> AttributeSchema:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown attribute {name!r}") from None

    def option(self, option_id: str) -> OptionRecord:
        try:
            return self.options[self._index[option_id]]
        except KeyError:
            raise KeyError(f"unknown option id {option_id!r}") from None

    def position(self, option_id: str) -> int:
        return self._index[option_id]

    def column(self, attr: str) -> np.ndarray:
        """Values of one attribute across all options (float64 or object array)."""
        if attr not in self._columns:
            schema = self.attribute(attr)
            if schema.is_numeric:
                col = np.array([opt.values[attr] for opt in self.options], dtype=np.float64)
            else:
                col = np.array([opt.values[attr] for opt in self.options], dtype=object)
            col.setflags(write=False)
            self._columns[attr] = col
        return self._columns[attr]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Catalog):
            return NotImplemented
        return self.schema == other.schema and self.options == other.options

    def __repr__(self) -> str:
        return f"Catalog(n={self.n}, k={self.k})"


def attribute_range(catalog: Catalog, attr: str) -> float:
    """Declared domain width hi - lo of a numeric attribute.

    The declared domain is used rather than the observed value spread so
    that scores stay stable as options are filtered.
    """
    return catalog.attribute(attr).range


# ---------------------------------------------------------------------------
# JSON format


def catalog_to_json(catalog: Catalog) -> dict:
    schema = []
    for a in catalog.schema:
        entry: dict[str, Any] = {"name": a.name, "kind": a.kind}
        if a.is_numeric:
            entry["lo"] = a.lo
            entry["hi"] = a.hi
            if a.discrete:
                entry["discrete"] = True
        else:
            entry["values"] = list(a.values or ())
        if a.prior_weight != 0.5:
            entry["prior_weight"] = a.prior_weight
        if a.value_prior is not None:
            entry["value_prior"] = dict(a.value_prior)
        schema.append(entry)
    return {
        "schema": schema,
        "options": [{"id": o.id, "values": dict(o.values)} for o in catalog.options],
    }


def _schema_from_json(entry: Mapping[str, Any], pos: int) -> AttributeSchema:
    try:
        return AttributeSchema(
            name=entry["name"],
            kind=entry["kind"],
            lo=entry.get("lo"),
            hi=entry.get("hi"),
            discrete=bool(entry.get("discrete", False)),
            values=tuple(entry["values"]) if "values" in entry else None,
            prior_weight=float(entry.get("prior_weight", 0.5)),
            value_prior=entry.get("value_prior"),
        )
    except KeyError as exc:
        raise ParseError(f"schema entry {pos}: missing field {exc}") from None


def catalog_from_json(data: Mapping[str, Any]) -> Catalog:
    if not isinstance(data, Mapping) or "schema" not in data:
        raise ParseError("catalog JSON must be an object with a 'schema' list")
    schema = [_schema_from_json(e, i) for i, e in enumerate(data["schema"])]
    options = []
    for i, entry in enumerate(data.get("options", [])):
        if "id" not in entry or "values" not in entry:
            raise ParseError(f"option entry {i}: needs 'id' and 'values'")
        options.append(OptionRecord(id=str(entry["id"]), values=entry["values"]))
    return Catalog(schema, options)


# ---------------------------------------------------------------------------
# CSV format


def _schema_from_csv_cell(cell: str, col: int) -> AttributeSchema:
    parts = cell.split(":")
    if len(parts) < 2:
        raise ParseError(f"header column {col}: expected name:kind[:...], got {cell!r}")
    name, kind = parts[0], parts[1]
    if kind in (NUMERIC, "integer"):
        if len(parts) != 4:
            raise ParseError(f"header column {col}: numeric attribute needs :lo:hi, got {cell!r}")
        try:
            lo, hi = float(parts[2]), float(parts[3])
        except ValueError:
            raise ParseError(f"header column {col}: non-numeric bounds in {cell!r}") from None
        return AttributeSchema.numeric(name, lo, hi, discrete=(kind == "integer"))
    if kind == QUALITATIVE:
        if len(parts) != 3 or not parts[2]:
            raise ParseError(f"header column {col}: qualitative attribute needs :v1|v2|..., got {cell!r}")
        return AttributeSchema.qualitative(name, parts[2].split("|"))
    raise ParseError(f"header column {col}: unknown kind {kind!r} in {cell!r}")


def catalog_to_csv(catalog: Catalog) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["id"]
    for a in catalog.schema:
        if a.is_numeric:
            kind = "integer" if a.discrete else NUMERIC
            header.append(f"{a.name}:{kind}:{_fmt_num(a.lo)}:{_fmt_num(a.hi)}")
        else:
            header.append(f"{a.name}:{QUALITATIVE}:" + "|".join(a.values or ()))
    writer.writerow(header)
    for opt in catalog.options:
        row = [opt.id]
        for a in catalog.schema:
            v = opt.values[a.name]
            row.append(_fmt_num(v) if a.is_numeric else v)
        writer.writerow(row)
    return buf.getvalue()


def _fmt_num(x: float | None) -> str:
    assert x is not None
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def catalog_from_csv(text: str) -> Catalog:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty CSV input")
    header = rows[0]
    if not header or header[0].strip() != "id":
        raise ParseError("line 1: first header cell must be 'id'")
    schema = [_schema_from_csv_cell(cell.strip(), i + 1) for i, cell in enumerate(header[1:])]
    options = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(schema) + 1:
            raise ParseError(f"line {lineno}: expected {len(schema) + 1} cells, got {len(row)}")
        values: dict[str, Any] = {}
        for a, cell in zip(schema, row[1:]):
            cell = cell.strip()
            if a.is_numeric:
                try:
                    values[a.name] = float(cell)
                except ValueError:
                    raise ParseError(f"line {lineno}: non-numeric value {cell!r} for {a.name}") from None
            else:
                values[a.name] = cell
        options.append(OptionRecord(id=row[0].strip(), values=values))
    return Catalog(schema, options)


# ---------------------------------------------------------------------------
# Loading / saving


def load_catalog(source: str | IO, fmt: str | None = None) -> Catalog:
    """Load a catalog from a path or open stream in ``json`` or ``csv`` format.

    When ``fmt`` is omitted and ``source`` is a path, the extension decides.
    """
    if isinstance(source, str):
        if fmt is None:
            fmt = "csv" if source.lower().endswith(".csv") else "json"
        with open(source, "r", encoding="utf-8") as f:
            text = f.read()
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        if fmt is None:
            fmt = "json"
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return catalog_from_json(data)
    if fmt == "csv":
        return catalog_from_csv(text)
    raise ValueError(f"unknown catalog format {fmt!r}")


def save_catalog(catalog: Catalog, path: str) -> None:
    if path.lower().endswith(".csv"):
        text = catalog_to_csv(catalog)
    else:
        text = json.dumps(catalog_to_json(catalog), indent=2) + "\n"
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


# ---------------------------------------------------------------------------
# Random generation


@dataclass(frozen=True)
class CatalogSpec:
    """Shape of a randomly generated catalog: option count plus attribute domains."""

    n: int
    attributes: tuple[AttributeSchema, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1:
            raise SchemaError("catalog spec needs n >= 1")
        if not self.attributes:
            raise SchemaError("catalog spec needs at least one attribute")
        for a in self.attributes:
            if not a.is_numeric and len(a.values or ()) < 2:
                raise SchemaError(f"{a.name}: degenerate qualitative domain")
        object.__setattr__(self, "attributes", tuple(self.attributes))


def generate_random_catalog(spec: CatalogSpec, seed: int) -> Catalog:
    """Uniform, per-attribute-independent random catalog; pure in (spec, seed)."""
    rng = np.random.default_rng(seed)
    columns: dict[str, list] = {}
    for a in spec.attributes:
        if a.is_numeric:
            if a.discrete:
                vals = rng.integers(int(a.lo), int(a.hi) + 1, size=spec.n)  # type: ignore[arg-type]
                columns[a.name] = [float(v) for v in vals]
            else:
                columns[a.name] = [float(v) for v in rng.uniform(a.lo, a.hi, size=spec.n)]
        else:
            idx = rng.integers(0, len(a.values or ()), size=spec.n)
            columns[a.name] = [a.values[i] for i in idx]  # type: ignore[index]
    options = [
        OptionRecord(id=f"o{i + 1}", values={name: col[i] for name, col in columns.items()})
        for i in range(spec.n)
    ]
    return Catalog(spec.attributes, options)


_ATTR_KINDS = {
    "int": lambda name: AttributeSchema.numeric(name, 0, 100, discrete=True),
    "num": lambda name: AttributeSchema.numeric(name, 0, 100),
    "ord": lambda name: AttributeSchema.numeric(name, 0, 4, discrete=True),
    "qual": lambda name: AttributeSchema.qualitative(name, tuple(f"v{j + 1}" for j in range(5))),
}


def parse_attrs_spec(spec: str) -> tuple[AttributeSchema, ...]:
    """Parse compact attribute specs like ``9int`` or ``5int+2qual+2ord``.

    Kinds: ``int`` integer [0, 100]; ``num`` continuous [0, 100]; ``ord``
    five ordered levels as integers [0, 4]; ``qual`` five unordered labels.
    """
    attrs: list[AttributeSchema] = []
    for term in spec.replace(",", "+").split("+"):
        term = term.strip()
        if not term:
            continue
        i = 0
        while i < len(term) and term[i].isdigit():
            i += 1
        count, kind = term[:i], term[i:]
        if not count or kind not in _ATTR_KINDS:
            raise SchemaError(f"bad attribute spec term {term!r} (use e.g. 9int, 2qual)")
        for _ in range(int(count)):
            attrs.append(_ATTR_KINDS[kind](f"a{len(attrs) + 1}"))
    if not attrs:
        raise SchemaError(f"attribute spec {spec!r} defines no attributes")
    return tuple(attrs)


def parse_catalog_spec(spec: str) -> CatalogSpec:
    """Parse ``rand-<n>x<attrs>`` catalog specs, e.g. ``rand-50x9int``."""
    body = spec[5:] if spec.startswith("rand-") else spec
    if "x" not in body:
        raise SchemaError(f"bad catalog spec {spec!r} (expected rand-<n>x<attrs>)")
    n_part, attr_part = body.split("x", 1)
    try:
        n = int(n_part)
    except ValueError:
        raise SchemaError(f"bad option count in catalog spec {spec!r}") from None
    return CatalogSpec(n=n, attributes=parse_attrs_spec(attr_part))
