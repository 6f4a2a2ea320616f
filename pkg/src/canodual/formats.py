"""Instance and report documents plus coordinate file parsing.

Instances travel as JSON with a strict schema (unknown fields are
rejected), reports as JSON built from plain dicts so they round-trip
losslessly through the standard json module.  Coordinate files are either
fixed-width ATOM records (columns per the PDB convention) or simple xyz
text.
"""

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .chains import Chain, FibrilModel
from .errors import InstanceError, ParseError
from .mdgp import AnchorRef, DistanceConstraint, MdgpInstance, SensorRef
from .quartic import QuadraticMap, QuarticProgram, QuarticTerm
from .solver import CriticalPoint, SolveReport

SCHEMA_VERSION = 1
SOLVER_FIELDS = {
    "grad_tol", "max_iter", "multistart_count", "seed", "step_shrink",
    "dedupe_tol", "search_box", "gap_tol",
}


@dataclass(eq=False)
class InstanceDocument:
    schema_version: int
    problem: str  # "quartic" or "mdgp"
    payload: object  # QuarticProgram or MdgpInstance
    solver: dict


def _require_keys(obj, required, optional, location):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", location)
    for key in obj:
        if key not in required and key not in optional:
            raise ParseError(f"unknown field {key!r}", location)
    for key in required:
        if key not in obj:
            raise ParseError(f"missing field {key!r}", location)


def _number(value, location):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError("expected a number", location)
    return float(value)


def _vector(value, location):
    if not isinstance(value, list):
        raise ParseError("expected an array of numbers", location)
    return [_number(v, f"{location}[{i}]") for i, v in enumerate(value)]


def _matrix(value, location):
    if not isinstance(value, list):
        raise ParseError("expected an array of rows", location)
    return [_vector(row, f"{location}[{i}]") for i, row in enumerate(value)]


def _endpoint(obj, location):
    _require_keys(obj, (), ("anchor", "sensor"), location)
    if len(obj) != 1:
        raise ParseError("endpoint needs exactly one of 'anchor' or 'sensor'", location)
    (kind, idx), = obj.items()
    if isinstance(idx, bool) or not isinstance(idx, int):
        raise ParseError("endpoint index must be an integer", location)
    return AnchorRef(idx) if kind == "anchor" else SensorRef(idx)


def _parse_mdgp(payload, location):
    _require_keys(payload, ("anchors", "sensors", "constraints"), ("epsilon",), location)
    anchors = _matrix(payload["anchors"], f"{location}.anchors")
    sensors = payload["sensors"]
    if isinstance(sensors, bool) or not isinstance(sensors, int):
        raise ParseError("'sensors' must be an integer", f"{location}.sensors")
    cons = payload["constraints"]
    if not isinstance(cons, list):
        raise ParseError("expected an array", f"{location}.constraints")
    parsed = []
    for i, con in enumerate(cons):
        loc = f"{location}.constraints[{i}]"
        _require_keys(con, ("a", "b", "r"), ("w",), loc)
        parsed.append(DistanceConstraint(
            end_a=_endpoint(con["a"], f"{loc}.a"),
            end_b=_endpoint(con["b"], f"{loc}.b"),
            target=_number(con["r"], f"{loc}.r"),
            weight=_number(con.get("w", 0.5), f"{loc}.w"),
        ))
    epsilon = payload.get("epsilon")
    if epsilon is not None:
        if isinstance(epsilon, list):
            epsilon = _vector(epsilon, f"{location}.epsilon")
        else:
            epsilon = _number(epsilon, f"{location}.epsilon")
    try:
        return MdgpInstance(anchors=np.array(anchors, dtype=float).reshape(-1, 3),
                            sensor_count=sensors, constraints=parsed, epsilon=epsilon)
    except (InstanceError, ValueError) as exc:
        raise ParseError(str(exc), location) from exc


def _parse_quartic(payload, location):
    _require_keys(payload, ("n", "terms", "Q", "f"), (), location)
    n = payload["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParseError("'n' must be a nonnegative integer", f"{location}.n")
    terms = payload["terms"]
    if not isinstance(terms, list):
        raise ParseError("expected an array", f"{location}.terms")
    parsed = []
    for i, term in enumerate(terms):
        loc = f"{location}.terms[{i}]"
        _require_keys(term, ("alpha", "A", "b", "c"), (), loc)
        try:
            quad = QuadraticMap(A=np.array(_matrix(term["A"], f"{loc}.A")),
                                b=np.array(_vector(term["b"], f"{loc}.b")),
                                c=_number(term["c"], f"{loc}.c"))
        except ValueError as exc:
            raise ParseError(str(exc), loc) from exc
        parsed.append(QuarticTerm(alpha=_number(term["alpha"], f"{loc}.alpha"), quad=quad))
    return QuarticProgram(
        n=n, terms=parsed,
        Q=np.array(_matrix(payload["Q"], f"{location}.Q")),
        f=np.array(_vector(payload["f"], f"{location}.f")),
    )


def parse_instance(text: str) -> InstanceDocument:
    """Parse and validate an instance document; errors carry locations."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from exc
    _require_keys(doc, ("schema_version", "problem", "payload"), ("solver",), "$")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc['schema_version']!r}",
                         "$.schema_version")
    problem = doc["problem"]
    if problem == "mdgp":
        payload = _parse_mdgp(doc["payload"], "$.payload")
    elif problem == "quartic":
        payload = _parse_quartic(doc["payload"], "$.payload")
    else:
        raise ParseError(f"unknown problem kind {problem!r}", "$.problem")
    solver = doc.get("solver", {})
    _require_keys(solver, (), SOLVER_FIELDS, "$.solver")
    return InstanceDocument(schema_version=SCHEMA_VERSION, problem=problem,
                            payload=payload, solver=dict(solver))


def _endpoint_dict(ref):
    return {"anchor": ref.index} if isinstance(ref, AnchorRef) else {"sensor": ref.index}


def serialize_instance(doc: InstanceDocument) -> str:
    """Canonical JSON text for an instance document."""
    if doc.problem == "mdgp":
        inst = doc.payload
        payload = {
            "anchors": [list(map(float, a)) for a in inst.anchors],
            "sensors": inst.sensor_count,
            "constraints": [
                {"a": _endpoint_dict(c.end_a), "b": _endpoint_dict(c.end_b),
                 "r": float(c.target), "w": float(c.weight)}
                for c in inst.constraints
            ],
            "epsilon": list(map(float, inst.epsilon)),
        }
    else:
        prog = doc.payload
        payload = {
            "n": prog.n,
            "terms": [
                {"alpha": float(t.alpha),
                 "A": [list(map(float, row)) for row in t.quad.A],
                 "b": list(map(float, t.quad.b)),
                 "c": float(t.quad.c)}
                for t in prog.terms
            ],
            "Q": [list(map(float, row)) for row in prog.Q],
            "f": list(map(float, prog.f)),
        }
    out = {"schema_version": doc.schema_version, "problem": doc.problem,
           "payload": payload}
    if doc.solver:
        out["solver"] = doc.solver
    return json.dumps(out, indent=2) + "\n"


def input_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def point_dict(p: CriticalPoint) -> dict:
    return {
        "x": [float(v) for v in p.x],
        "dual": [float(v) for v in p.sigma],
        "primal_value": float(p.primal_value),
        "dual_value": float(p.dual_value),
        "gap": float(p.gap),
        "region": p.region.value,
        "kind": p.kind.value,
        "grad_norm": float(p.grad_norm),
    }


def report_document(report: SolveReport, source_text: str,
                    violations=None, timing: bool = False) -> dict:
    """Report dict ready for json.dumps.

    Timing is opt-in so that identical inputs produce byte-identical
    reports by default.
    """
    doc = {
        "schema_version": SCHEMA_VERSION,
        "input_sha256": input_digest(source_text),
        "best": point_dict(report.best) if report.best is not None else None,
        "points": [point_dict(p) for p in report.all_points],
        "iterations": report.iterations,
        "diagnostics": list(report.diagnostics),
    }
    if violations is not None:
        doc["violations"] = [
            {"constraint": v.constraint, "achieved": v.achieved,
             "residual": v.residual, "flagged": v.flagged}
            for v in violations
        ]
    if timing:
        doc["wall_time"] = report.wall_time
    return doc


@dataclass(frozen=True)
class PdbAtomRecord:
    record: str
    serial: int
    name: str
    res_name: str
    chain_id: str
    res_seq: int
    x: float
    y: float
    z: float

    @property
    def label(self) -> str:
        return f"{self.res_name}{self.res_seq}.{self.name}"

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def _pdb_float(line, lo, hi, what, lineno):
    raw = line[lo:hi]
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"non-numeric {what} field {raw.strip()!r}",
                         f"line {lineno}, columns {lo + 1}-{hi}") from None


def parse_pdb_atoms(text: str) -> list[PdbAtomRecord]:
    """All ATOM records of a fixed-width coordinate file."""
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line[:6].strip() != "ATOM":
            continue
        if len(line) < 54:
            raise ParseError("ATOM line shorter than the coordinate columns",
                             f"line {lineno}")
        try:
            serial = int(line[6:11])
        except ValueError:
            raise ParseError(f"non-numeric serial {line[6:11].strip()!r}",
                             f"line {lineno}, columns 7-11") from None
        try:
            res_seq = int(line[22:26])
        except ValueError:
            raise ParseError(f"non-numeric residue number {line[22:26].strip()!r}",
                             f"line {lineno}, columns 23-26") from None
        records.append(PdbAtomRecord(
            record="ATOM",
            serial=serial,
            name=line[12:16].strip(),
            res_name=line[17:20].strip(),
            chain_id=line[21].strip() or "A",
            res_seq=res_seq,
            x=_pdb_float(line, 30, 38, "x", lineno),
            y=_pdb_float(line, 38, 46, "y", lineno),
            z=_pdb_float(line, 46, 54, "z", lineno),
        ))
    return records


def _chains_from_records(records) -> list[Chain]:
    grouped: dict[str, list] = {}
    for rec in records:
        grouped.setdefault(rec.chain_id, []).append(rec)
    chains = []
    for cid, recs in grouped.items():
        names = [r.label for r in recs]
        coords = np.array([[r.x, r.y, r.z] for r in recs])
        chains.append(Chain(name=cid, atom_names=names, coords=coords))
    return chains


def _parse_xyz(text: str) -> list[Chain]:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        return []
    try:
        count = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"expected an atom count, got {lines[0].strip()!r}",
                         "line 1") from None
    body = lines[2:2 + count]
    if len(body) < count:
        raise ParseError(f"expected {count} atom lines, found {len(body)}", "line 2")
    names, coords = [], []
    for i, line in enumerate(body):
        lineno = i + 3
        parts = line.split()
        if len(parts) < 4:
            raise ParseError("expected 'symbol x y z'", f"line {lineno}")
        try:
            coords.append([float(parts[1]), float(parts[2]), float(parts[3])])
        except ValueError:
            raise ParseError("non-numeric coordinate", f"line {lineno}") from None
        names.append(f"{parts[0]}{i + 1}")
    return [Chain(name="A", atom_names=names, coords=np.array(coords))]


def parse_coordinates(text: str, format: str = "pdb-atom") -> list[Chain]:
    """Chains from coordinate text; 'pdb-atom' groups by chain id, 'xyz'
    yields a single chain with positional atom names."""
    if format == "pdb-atom":
        records = parse_pdb_atoms(text)
        return _chains_from_records(records)
    if format == "xyz":
        return _parse_xyz(text)
    raise ValueError(f"unknown coordinate format {format!r}")


def _split_label(label: str) -> tuple[str, int, str]:
    """Best-effort split of 'ALA4.CB' into residue name, number, atom name."""
    if "." in label:
        res, atom = label.split(".", 1)
        head = res.rstrip("0123456789")
        tail = res[len(head):]
        if head and tail:
            return head[:3], int(tail) % 10000, atom[:4]
    return "UNK", 1, label[:4]


def write_pdb(model: FibrilModel) -> str:
    """ATOM records for every chain, fixed-width columns."""
    lines = []
    serial = 1
    for name in model.names():
        chain = model.chains[name]
        for label, pos in zip(chain.atom_names, chain.coords):
            res, seq, atom = _split_label(label)
            lines.append(
                f"ATOM  {serial:>5d} {atom:<4s} {res:<3s} {name[:1]}{seq:>4d}    "
                f"{pos[0]:8.3f}{pos[1]:8.3f}{pos[2]:8.3f}"
            )
            serial += 1
        lines.append(f"TER   {serial:>5d}")
        serial += 1
    lines.append("END")
    return "\n".join(lines) + "\n"


def write_xyz(chain: Chain, comment: str = "") -> str:
    lines = [str(len(chain)), comment]
    for label, pos in zip(chain.atom_names, chain.coords):
        lines.append(f"{label} {pos[0]:.8f} {pos[1]:.8f} {pos[2]:.8f}")
    return "\n".join(lines) + "\n"
