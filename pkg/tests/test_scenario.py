"""Scenario DSL: parsing, error reporting, canonical emission, round-trips."""

import random

import pytest

from microgridsim import (
    BusKind,
    ParseErrorKind,
    ScenarioFormatError,
    bundled_scenario_text,
    emit_scenario,
    parse_scenario,
)
from conftest import make_random_scenario, scenarios_close

MINIMAL = """\
[simulation]
steps = 4
start_hour = 0
solver = acpf
seed = 9

[bus]
id = root
kind = slack
nominal_voltage_v = 230

[bus]
id = leaf
kind = pq
nominal_voltage_v = 230

[line]
id = wire
from = root
to = leaf
resistance_ohm = 0.01

[load]
id = sink
bus = leaf
p_w = 500
"""


def errors_of(text):
    with pytest.raises(ScenarioFormatError) as exc:
        parse_scenario(text)
    return exc.value.errors


class TestParseBasics:
    def test_minimal_scenario(self):
        s = parse_scenario(MINIMAL)
        assert [b.id for b in s.network.buses] == ["root", "leaf"]
        assert s.network.buses[0].kind is BusKind.SLACK
        assert s.config.steps == 4
        assert s.config.v_base_v == 230.0  # defaults to the bus voltage
        assert s.config.s_base_va == 10000.0
        assert s.weather is not None and s.weather_trace is None
        assert s.weather.seed == 9

    def test_bundled_case1_contents(self):
        s = parse_scenario(bundled_scenario_text("case1"))
        assert sum(b.kind is BusKind.SLACK for b in s.network.buses) == 1
        assert len(s.network.loads) == 3
        assert len(s.network.winds) == 1
        assert len(s.network.pvs) == 2
        assert s.config.solver == "simple"

    def test_comments_and_blank_lines_ignored(self):
        text = "# leading comment\n\n" + MINIMAL.replace(
            "steps = 4", "steps = 4  # two days would be 48"
        )
        assert parse_scenario(text).config.steps == 4

    def test_defaults_materialized(self):
        s = parse_scenario(MINIMAL)
        assert s.network.lines[0].reactance == 0.0
        assert s.network.loads[0].reactive_power == 0.0

    def test_weather_trace_variant(self):
        text = MINIMAL + "\n[weather]\ntrace = wx.csv\n"
        s = parse_scenario(text)
        assert s.weather is None
        assert s.weather_trace == "wx.csv"


def _line_containing(text, line_no):
    return text.splitlines()[line_no - 1]


class TestParseErrors:
    def test_missing_required_key(self):
        text = MINIMAL.replace("id = root\n", "")
        errs = errors_of(text)
        assert len(errs) == 1
        assert errs[0].kind is ParseErrorKind.MISSING_REQUIRED
        assert "[bus]" in _line_containing(text, errs[0].line)

    def test_type_mismatch_cites_value(self):
        text = MINIMAL.replace("resistance_ohm = 0.01", "resistance_ohm = abc")
        errs = errors_of(text)
        assert len(errs) == 1
        assert errs[0].kind is ParseErrorKind.TYPE_MISMATCH
        line = _line_containing(text, errs[0].line)
        assert "abc" in line
        assert line[errs[0].column - 1 :].startswith("abc")

    def test_unknown_key(self):
        text = MINIMAL.replace("p_w = 500", "p_w = 500\nwattage = 3")
        errs = errors_of(text)
        assert [e.kind for e in errs] == [ParseErrorKind.UNKNOWN_KEY]
        assert "wattage" in _line_containing(text, errs[0].line)

    def test_unknown_section(self):
        errs = errors_of(MINIMAL + "\n[battery]\nid = b\n")
        assert errs[0].kind is ParseErrorKind.UNKNOWN_KEY
        assert "battery" in errs[0].message

    def test_syntax_error_line(self):
        text = MINIMAL + "\nthis is not an entry\n"
        errs = errors_of(text)
        assert errs[0].kind is ParseErrorKind.SYNTAX
        assert "this is not an entry" in _line_containing(text, errs[0].line)

    def test_entry_before_any_section(self):
        errs = errors_of("steps = 4\n" + MINIMAL)
        assert errs[0].kind is ParseErrorKind.SYNTAX
        assert errs[0].line == 1

    def test_duplicate_key_in_section(self):
        text = MINIMAL.replace("p_w = 500", "p_w = 500\np_w = 600")
        errs = errors_of(text)
        assert errs[0].kind is ParseErrorKind.SEMANTIC_CONFLICT
        assert "p_w" in errs[0].message

    def test_duplicate_object_id(self):
        text = MINIMAL + "\n[load]\nid = sink\nbus = leaf\np_w = 10\n"
        errs = errors_of(text)
        assert errs[0].kind is ParseErrorKind.SEMANTIC_CONFLICT
        assert "sink" in errs[0].message

    def test_reserved_id(self):
        text = MINIMAL.replace("id = sink", "id = weather")
        errs = errors_of(text)
        assert "reserved" in errs[0].message

    def test_dangling_bus_reference_cites_entry(self):
        text = MINIMAL.replace("to = leaf", "to = h9")
        errs = errors_of(text)
        dangling = [e for e in errs if "h9" in e.message]
        assert len(dangling) == 1
        assert dangling[0].kind is ParseErrorKind.SEMANTIC_CONFLICT
        cited = _line_containing(text, dangling[0].line)
        assert "h9" in cited
        assert cited[dangling[0].column - 1 :].startswith("h9")

    def test_two_slack_buses(self):
        text = MINIMAL.replace("kind = pq", "kind = slack")
        errs = errors_of(text)
        assert any("slack" in e.message for e in errs)

    def test_missing_simulation_section(self):
        text = MINIMAL.split("[bus]", 1)[1]
        errs = errors_of("[bus]" + text)
        assert any(
            e.kind is ParseErrorKind.MISSING_REQUIRED and "simulation" in e.message
            for e in errs
        )

    def test_repeated_simulation_section(self):
        errs = errors_of(MINIMAL + "\n[simulation]\nsteps = 9\n")
        assert any(e.kind is ParseErrorKind.SEMANTIC_CONFLICT for e in errs)

    def test_trace_and_params_conflict(self):
        errs = errors_of(MINIMAL + "\n[weather]\ntrace = wx.csv\ncloud_step = 0.1\n")
        assert any(e.kind is ParseErrorKind.SEMANTIC_CONFLICT for e in errs)

    def test_solver_enum(self):
        errs = errors_of(MINIMAL.replace("solver = acpf", "solver = fdlf"))
        assert errs[0].kind is ParseErrorKind.TYPE_MISMATCH

    def test_seed_range(self):
        errs = errors_of(MINIMAL.replace("seed = 9", f"seed = {2**64}"))
        assert errs[0].kind is ParseErrorKind.TYPE_MISMATCH

    def test_negative_resistance(self):
        errs = errors_of(MINIMAL.replace("resistance_ohm = 0.01", "resistance_ohm = -1"))
        assert errs[0].kind is ParseErrorKind.TYPE_MISMATCH

    def test_bad_id_charset(self):
        errs = errors_of(MINIMAL.replace("id = sink", "id = Sink"))
        assert errs[0].kind is ParseErrorKind.TYPE_MISMATCH

    def test_all_errors_reported_together(self):
        text = MINIMAL.replace("steps = 4", "steps = oops").replace(
            "p_w = 500", "p_w = many"
        )
        assert len(errors_of(text)) == 2

    def test_error_lines_contain_offending_tokens(self):
        # Battery of malformed inputs; every reported line must contain the token.
        cases = [
            (MINIMAL.replace("resistance_ohm = 0.01", "resistance_ohm = bogus"), "bogus"),
            (MINIMAL + "\n[load]\nid = z!\nbus = leaf\np_w = 1\n", "z!"),
            (MINIMAL + "\nnot_an_entry\n", "not_an_entry"),
            (MINIMAL.replace("solver = acpf", "solver = magic"), "magic"),
            (MINIMAL.replace("p_w = 500", "p_w = 500\nmystery_key = 1"), "mystery_key"),
        ]
        for text, token in cases:
            errs = errors_of(text)
            assert any(token in _line_containing(text, e.line) for e in errs), token


class TestEmission:
    def test_bundled_round_trip_exact(self):
        for name in ("case1", "case2", "case2_pv"):
            s = parse_scenario(bundled_scenario_text(name))
            emitted = emit_scenario(s)
            assert parse_scenario(emitted) == s
            assert emit_scenario(parse_scenario(emitted)) == emitted

    def test_emission_is_canonical_order(self):
        s = parse_scenario(bundled_scenario_text("case1"))
        emitted = emit_scenario(s)
        kinds = [
            line.strip("[]") for line in emitted.splitlines() if line.startswith("[")
        ]
        order = {"simulation": 0, "weather": 1, "bus": 2, "line": 3, "grid": 4,
                 "load": 5, "pv": 6, "wind": 7}
        assert kinds[0] == "simulation"
        assert [order[k] for k in kinds] == sorted(order[k] for k in kinds)

    def test_lf_endings(self):
        s = parse_scenario(MINIMAL)
        assert "\r" not in emit_scenario(s)
        assert emit_scenario(s).endswith("\n")

    def test_generated_scenarios_round_trip(self):
        rng = random.Random(77)
        for _ in range(100):
            original = make_random_scenario(rng)
            normalized = parse_scenario(emit_scenario(original))
            assert scenarios_close(original, normalized)
            again = parse_scenario(emit_scenario(normalized))
            assert again == normalized


class TestFuzz:
    def test_mutated_documents_never_crash(self):
        # Arbitrary garbage must either parse or raise ScenarioFormatError.
        rng = random.Random(55)
        base = bundled_scenario_text("case2")
        alphabet = "abz_=[]#.0123456789 \n\t-+eE!\r"
        for _ in range(500):
            if rng.random() < 0.5:
                text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 200)))
            else:
                chars = list(base)
                for _ in range(rng.randint(1, 15)):
                    pos = rng.randrange(len(chars))
                    roll = rng.random()
                    if roll < 0.4:
                        chars[pos] = rng.choice(alphabet)
                    elif roll < 0.7:
                        del chars[pos]
                    else:
                        chars.insert(pos, rng.choice(alphabet))
                text = "".join(chars)
            try:
                parse_scenario(text)
            except ScenarioFormatError:
                pass
