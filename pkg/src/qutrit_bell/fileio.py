"""Settings and state documents (JSON)."""

import json
import math

from .experiment import MeasurementSettings, PureState
from .sixport import PhaseTriple

PARTIES = ("alice", "bob", "celine")

# exact multiples of pi accepted as strings in settings files
ANGLE_LITERALS = {
    "pi/3": math.pi / 3,
    "2pi/3": 2 * math.pi / 3,
    "pi": math.pi,
    "5pi/3": 5 * math.pi / 3,
}


class InputError(ValueError):
    """A user-supplied file is missing or malformed."""

    def __init__(self, path, field, message):
        self.path = str(path)
        self.field = field
        super().__init__(f"{self.path}: {field}: {message}")


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(path, "<file>", exc.strerror or str(exc)) from None
    except json.JSONDecodeError as exc:
        raise InputError(path, "<document>", f"invalid JSON: {exc}") from None


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def parse_angle(value, path="<settings>", field="angle"):
    if isinstance(value, str):
        key = value.strip().replace(" ", "")
        if key in ANGLE_LITERALS:
            return ANGLE_LITERALS[key]
        raise InputError(path, field, f"unknown angle literal {value!r}")
    if not _is_number(value) or not math.isfinite(value):
        raise InputError(path, field, f"expected a finite number, got {value!r}")
    return float(value)


def settings_from_doc(doc, path="<settings>"):
    if not isinstance(doc, dict):
        raise InputError(path, "<document>", "expected an object with alice, bob, celine")
    parties = []
    for who in PARTIES:
        if who not in doc:
            raise InputError(path, who, "missing")
        pair = doc[who]
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError(path, who, "expected an array of two phase triples")
        triples = []
        for s, triple in enumerate(pair):
            field = f"{who}[{s}]"
            if not isinstance(triple, list) or len(triple) != 3:
                raise InputError(path, field, "expected an array of three angles")
            triples.append(PhaseTriple(*(
                parse_angle(v, path, f"{field}[{p}]") for p, v in enumerate(triple)
            )))
        parties.append(tuple(triples))
    return MeasurementSettings(*parties)


def settings_to_doc(settings):
    return {
        who: [list(t.as_tuple()) for t in party]
        for who, party in zip(PARTIES, settings.parties())
    }


def load_settings(path):
    return settings_from_doc(_load_json(path), path)


def state_from_doc(doc, path="<state>"):
    if not isinstance(doc, list) or len(doc) != 27:
        raise InputError(path, "<document>", "expected an array of 27 [re, im] pairs")
    amps = []
    for idx, pair in enumerate(doc):
        field = f"[{idx}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError(path, field, "expected a [re, im] pair")
        if not all(_is_number(x) and math.isfinite(x) for x in pair):
            raise InputError(path, field, f"non-numeric or non-finite entry {pair!r}")
        amps.append(complex(pair[0], pair[1]))
    try:
        return PureState(amps)
    except ValueError as exc:
        raise InputError(path, "<norm>", str(exc)) from None


def state_to_doc(state):
    return [[float(a.real), float(a.imag)] for a in state.amplitudes]


def load_state(path):
    return state_from_doc(_load_json(path), path)
