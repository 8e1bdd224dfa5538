import subprocess
import sys

import pytest

from ordauto.cli import main
from ordauto.library import AUTOMATA, PROGRAMS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    lines = out.strip().splitlines()
    return code, (lines[-1] if lines else ""), out, err


def test_ord_eval_absorbs_smaller_term(capsys):
    assert run(capsys, "ord", "eval", "w+w^2")[:2] == (0, "w^2")


def test_ord_other_operations(capsys):
    assert run(capsys, "ord", "cmp", "w+1", "w")[1] == "gt"
    assert run(capsys, "ord", "sub", "w", "w*2+3")[1] == "w+3"
    assert run(capsys, "ord", "card", "w^2")[1] == "aleph0"


def test_aut_run_example_one(capsys):
    assert run(capsys, "aut", "run", "A0.aut", "0^(w) 1^(w)")[:2] == (0, "accept state=z2")


def test_aut_run_with_a_file(capsys, tmp_path):
    from ordauto.library import automaton_text
    f = tmp_path / "mine.aut"
    f.write_text(automaton_text("parity"))
    code, last, _, _ = run(capsys, "aut", "run", str(f), "0 1 1")
    assert code == 0 and last.startswith(("accept", "reject"))


def test_suite_coherence_summary(capsys):
    code, last, _, _ = run(capsys, "suite", "coherence", "--samples", "10000", "--seed", "7")
    assert (code, last) == (0, "pass=10000 fail=0")


def test_suite_summaries_are_reproducible(capsys):
    a = run(capsys, "suite", "pumping", "--samples", "50", "--seed", "3")[1]
    b = run(capsys, "suite", "pumping", "--samples", "50", "--seed", "3")[1]
    assert a == b


def test_suite_fooling_sizes(capsys):
    code, last, _, _ = run(capsys, "suite", "fooling")
    assert code == 0
    assert last == "L1_equal=8 L2_omega_powers=6 L_count=10 verified=true"


def test_suite_compile_validate(capsys):
    code, last, _, _ = run(capsys, "suite", "compile-validate", "--samples", "60")
    assert code == 0 and last.startswith("agreement=1.0000 mismatches=0 maxcs=")


@pytest.mark.parametrize("name", AUTOMATA)
def test_bundled_automata_roundtrip(capsys, name):
    code, last, _, _ = run(capsys, "aut", "check", name)
    assert code == 0 and "roundtrip=true" in last


@pytest.mark.parametrize("name", PROGRAMS)
def test_bundled_programs_roundtrip(capsys, name):
    code, last, _, _ = run(capsys, "otm", "check", name)
    assert code == 0 and "roundtrip=true" in last


def test_otm_run_and_space(capsys):
    code, last, _, _ = run(capsys, "otm", "run", "sweep", "0^(w) 1^(w)")
    assert code == 0 and last == "verdict=halted accept=true time=w*2+1 space=0 passes=1"
    code, last, _, _ = run(capsys, "otm", "space", "compare", "0^5 1^5", "0^(w) 1^(w)")
    assert last == "max_space=65 flagged=0"


def test_compile_then_validate(capsys):
    code, handle, _, _ = run(capsys, "compile", "only_ones")
    assert code == 0 and handle.startswith("only_ones#B=")
    code, last, _, _ = run(capsys, "validate", "only_ones", handle, "--samples", "80", "--seed", "5")
    assert code == 0 and last == "agreement=1.0000 mismatches=0 maxcs=1"


def test_validate_fails_with_small_bound(capsys):
    _, handle, _, _ = run(capsys, "compile", "three_pass", "--bound", "2")
    code, last, out, _ = run(capsys, "validate", "three_pass", handle, "--samples", "40")
    assert code == 1 and "warning: bound 2" in out


def test_validate_rejects_foreign_handle(capsys):
    _, handle, _, _ = run(capsys, "compile", "sweep")
    code, _, _, err = run(capsys, "validate", "parity", handle)
    assert code == 2 and "does not match" in err


@pytest.mark.parametrize("argv,needle", [
    (["ord", "eval", "w^^2"], "column 3"),
    (["word", "norm", "0^(w"], "column 3"),
    (["aut", "run", "nowhere", "0"], "no such file"),
    (["otm", "run", "sweep", "0 2"], "not in alphabet"),
])
def test_errors_exit_two(capsys, argv, needle):
    code, _, _, err = run(capsys, *argv)
    assert code == 2 and needle in err


def test_parse_error_reports_line(capsys, tmp_path):
    f = tmp_path / "bad.otm"
    f.write_text("name: B\nalphabet: 0\nstates: a\ngamma: 1\nrules:\n  a, 0, 0 -> nope, 0, R, S\n")
    code, _, _, err = run(capsys, "otm", "run", str(f), "0")
    assert code == 2 and "line 6" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "ordauto", "ord", "eval", "w*2+w"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.strip() == "w*3"
