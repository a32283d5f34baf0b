"""Line-oriented text documents for every value the CLI exchanges.

UTF-8, `#` comments, blank lines ignored.  A document is a kind header, a
frame header, an `aux:` header for the two-frame kinds, then assignment
lines.  All numerals are exact rationals (integers or `p/q`); decimals are
rejected so the pipeline stays exact end to end.  Parsing validates every
type invariant at load time and reports offending line numbers; emission is
canonical (bitmask order, lowest terms), and parse(emit(x)) == x exactly.
"""

import re
from fractions import Fraction

from .capacity import Capacity, DempsterModel
from .errors import DocumentError, InvariantViolation
from .kinematics import JointMeasure, ProbabilityMeasure
from .lattice import Frame, SignedMassFunction

KINDS = ("capacity", "mass", "probability", "model", "joint")

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_PAIR = re.compile(r"^\((\w+),(\w+)\)$")


def _parse_rational(token: str, line_no: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise DocumentError(
            f"expected a rational (integer or p/q), got {token!r}", line=line_no
        )
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise DocumentError(f"zero denominator in {token!r}", line=line_no) from None


def _parse_subset(frame: Frame, token: str, line_no: int) -> int:
    text = token.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise DocumentError(f"expected a subset literal like {{a,b}}, got {token!r}", line=line_no)
    inner = text[1:-1].strip()
    mask = 0
    if inner:
        for part in inner.split(","):
            label = part.strip()
            if label not in frame.labels:
                raise DocumentError(f"unknown label {label!r}", line=line_no)
            bit = 1 << frame.index(label)
            if mask & bit:
                raise DocumentError(f"label {label!r} repeated in subset", line=line_no)
            mask |= bit
    return mask


def _logical_lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def _header(lines, name: str):
    try:
        line_no, line = next(lines)
    except StopIteration:
        raise DocumentError(f"missing `{name}:` header") from None
    if not line.startswith(name + ":"):
        raise DocumentError(f"expected `{name}:` header, got {line!r}", line=line_no)
    return line_no, line[len(name) + 1 :].strip()


def _frame_from(text: str, line_no: int) -> Frame:
    labels = tuple(text.split())
    try:
        return Frame(labels)
    except InvariantViolation as exc:
        raise DocumentError(str(exc), line=line_no) from None


def parse_document(text: str, allow_nonstandard: bool = False):
    """Parse one document into the matching domain value.

    Returns a Capacity, SignedMassFunction, ProbabilityMeasure,
    DempsterModel, or JointMeasure according to the kind header.  With
    ``allow_nonstandard`` capacity values may leave [0, 1].
    """
    lines = _logical_lines(text)
    kind_line, kind = _header(lines, "kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown kind {kind!r}; expected one of {KINDS}", line=kind_line)
    frame_line, frame_text = _header(lines, "frame")
    frame = _frame_from(frame_text, frame_line)
    rest = list(lines)
    if kind == "capacity":
        return _parse_capacity(frame, rest, allow_nonstandard)
    if kind == "mass":
        return _parse_mass(frame, rest)
    if kind == "probability":
        return _parse_probability(frame, rest)
    if kind == "model":
        return _parse_model(frame, rest)
    return _parse_joint(frame, rest)


def _assignments(frame: Frame, rest):
    seen = {}
    for line_no, line in rest:
        parts = line.split()
        if len(parts) != 2:
            raise DocumentError(
                f"expected `subset value`, got {line!r}", line=line_no
            )
        mask = _parse_subset(frame, parts[0], line_no)
        if mask in seen:
            raise DocumentError(
                f"duplicate assignment for {frame.subset_str(mask)}", line=line_no
            )
        seen[mask] = (_parse_rational(parts[1], line_no), line_no)
    return seen


def _parse_capacity(frame, rest, allow_nonstandard):
    seen = _assignments(frame, rest)
    if 0 in seen and seen[0][0] != 0:
        raise DocumentError("the empty set must have value 0", line=seen[0][1])
    if frame.full not in seen:
        raise DocumentError("the full-frame subset must be assigned 1")
    if seen[frame.full][0] != 1:
        raise DocumentError(
            f"the full-frame subset must be 1, got {seen[frame.full][0]}",
            line=seen[frame.full][1],
        )
    if not allow_nonstandard:
        for mask, (value, line_no) in seen.items():
            if not 0 <= value <= 1:
                raise DocumentError(
                    f"capacity value {value} outside [0, 1]; pass --allow-nonstandard "
                    "to load it anyway",
                    line=line_no,
                )
    return Capacity.from_map(frame, {m: v for m, (v, _) in seen.items() if m != frame.full})


def _parse_mass(frame, rest):
    seen = _assignments(frame, rest)
    if 0 in seen:
        raise DocumentError("the empty set cannot carry mass", line=seen[0][1])
    total = sum((v for v, _ in seen.values()), Fraction(0))
    if total != 1:
        raise DocumentError(f"masses sum to {total}, expected 1")
    return SignedMassFunction(frame, {m: v for m, (v, _) in seen.items()})


def _parse_probability(frame, rest):
    seen = _assignments(frame, rest)
    weights = [Fraction(0)] * frame.n
    for mask, (value, line_no) in seen.items():
        if mask.bit_count() != 1:
            raise DocumentError(
                f"probability files assign singletons only, got {frame.subset_str(mask)}",
                line=line_no,
            )
        if value < 0:
            raise DocumentError(f"negative weight {value}", line=line_no)
        weights[mask.bit_length() - 1] = value
    total = sum(weights)
    if total != 1:
        raise DocumentError(f"weights sum to {total}, expected 1")
    return ProbabilityMeasure(frame, tuple(weights))


def _parse_model(frame, rest):
    rest_iter = iter(rest)
    try:
        aux_no, aux_text = _header(rest_iter, "aux")
    except DocumentError:
        raise DocumentError("model files need an `aux:` header after `frame:`") from None
    y_frame = _frame_from(aux_text, aux_no)
    u = {}
    gamma = {}
    for line_no, line in rest_iter:
        parts = line.split()
        if len(parts) != 4 or parts[2] != "->":
            raise DocumentError(
                f"expected `y value -> {{subset}}`, got {line!r}", line=line_no
            )
        y = parts[0]
        if y not in y_frame.labels:
            raise DocumentError(f"unknown auxiliary outcome {y!r}", line=line_no)
        if y in u:
            raise DocumentError(f"duplicate assignment for {y!r}", line=line_no)
        value = _parse_rational(parts[1], line_no)
        if value <= 0:
            raise DocumentError(f"u({y}) must be positive, got {value}", line=line_no)
        mask = _parse_subset(frame, parts[3], line_no)
        if mask == 0:
            raise DocumentError(f"gamma({y}) must be nonempty", line=line_no)
        u[y] = value
        gamma[y] = mask
    try:
        return DempsterModel(frame, y_frame, u, gamma)
    except InvariantViolation as exc:
        raise DocumentError(str(exc)) from None


def _parse_joint(frame, rest):
    rest_iter = iter(rest)
    try:
        aux_no, aux_text = _header(rest_iter, "aux")
    except DocumentError:
        raise DocumentError("joint files need an `aux:` header after `frame:`") from None
    y_frame = _frame_from(aux_text, aux_no)
    weights = [[Fraction(0)] * y_frame.n for _ in range(frame.n)]
    seen = set()
    for line_no, line in rest_iter:
        parts = line.split()
        if len(parts) != 2:
            raise DocumentError(f"expected `(x,y) value`, got {line!r}", line=line_no)
        pair = _PAIR.match(parts[0])
        if not pair:
            raise DocumentError(f"expected a pair literal like (a,y1), got {parts[0]!r}", line=line_no)
        x_lab, y_lab = pair.group(1), pair.group(2)
        if x_lab not in frame.labels:
            raise DocumentError(f"unknown label {x_lab!r}", line=line_no)
        if y_lab not in y_frame.labels:
            raise DocumentError(f"unknown auxiliary outcome {y_lab!r}", line=line_no)
        if (x_lab, y_lab) in seen:
            raise DocumentError(f"duplicate assignment for ({x_lab},{y_lab})", line=line_no)
        seen.add((x_lab, y_lab))
        value = _parse_rational(parts[1], line_no)
        if value < 0:
            raise DocumentError(f"negative weight {value}", line=line_no)
        weights[frame.index(x_lab)][y_frame.index(y_lab)] = value
    try:
        return JointMeasure(frame, y_frame, tuple(tuple(row) for row in weights))
    except InvariantViolation as exc:
        raise DocumentError(str(exc)) from None


# -- emission -------------------------------------------------------------------


def emit_document(value, notes: tuple[str, ...] = ()) -> str:
    """Serialize a domain value to its canonical document text."""
    lines = [f"# note: {n}" for n in notes]
    if isinstance(value, Capacity):
        lines.append("kind: capacity")
        lines.append(f"frame: {' '.join(value.frame.labels)}")
        for mask in value.frame.subsets():
            if mask == 0 or (value[mask] == 0 and mask != value.frame.full):
                continue
            lines.append(f"{value.frame.subset_str(mask)} {value[mask]}")
    elif isinstance(value, SignedMassFunction):
        lines.append("kind: mass")
        lines.append(f"frame: {' '.join(value.frame.labels)}")
        for mask in value.focal_sets:
            lines.append(f"{value.frame.subset_str(mask)} {value.masses[mask]}")
    elif isinstance(value, ProbabilityMeasure):
        lines.append("kind: probability")
        lines.append(f"frame: {' '.join(value.frame.labels)}")
        for i, w in enumerate(value.weights):
            if w != 0:
                lines.append("{" + value.frame.labels[i] + "}" + f" {w}")
    elif isinstance(value, DempsterModel):
        lines.append("kind: model")
        lines.append(f"frame: {' '.join(value.x_frame.labels)}")
        lines.append(f"aux: {' '.join(value.y_frame.labels)}")
        for y in value.y_frame.labels:
            lines.append(f"{y} {value.u[y]} -> {value.x_frame.subset_str(value.gamma[y])}")
    elif isinstance(value, JointMeasure):
        lines.append("kind: joint")
        lines.append(f"frame: {' '.join(value.x_frame.labels)}")
        lines.append(f"aux: {' '.join(value.y_frame.labels)}")
        for i, x_lab in enumerate(value.x_frame.labels):
            for j, y_lab in enumerate(value.y_frame.labels):
                if value.weights[i][j] != 0:
                    lines.append(f"({x_lab},{y_lab}) {value.weights[i][j]}")
    else:
        raise InvariantViolation(f"cannot serialize {type(value).__name__}")
    return "\n".join(lines) + "\n"
