from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from ittm.cli import main, validate
from conftest import PROGRAMS


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_clock(capsys):
    code, out, _ = call(capsys, "run", "--clock", "w")
    assert (code, out) == (0, "Halted stage=w output=0|0\n")


def test_run_with_input(capsys):
    code, out, _ = call(capsys, "run", str(PROGRAMS / "count_ones.itm"), "--input", "110|0")
    assert code == 0
    assert out.splitlines()[1] == "input=11|0 (codes the natural 2)"


def test_run_looper_diverges(capsys):
    code, out, _ = call(capsys, "run", str(PROGRAMS / "looper.itm"))
    assert (code, out) == (2, "Diverges first=w repeat=w*2\n")


def test_run_undetermined(capsys, tmp_path):
    src = tmp_path / "grow.itm"
    src.write_text(
        "start mark\nlimit lim\nhalt done\n"
        "mark: default write **1 move R goto out\n"
        "out:\n  on *1* write *** move R goto out\n  on *0* write *1* move L goto back\n"
        "back:\n  on **1 write *** move R goto out\n  default write *** move L goto back\n"
        "lim: default write *** move S goto done\n"
    )
    code, out, _ = call(capsys, "run", str(src), "--budget-steps", "2000")
    assert code == 3 and out.startswith("Undetermined reason=step_budget")


def test_run_json_and_trace(capsys, tmp_path):
    trace = tmp_path / "t.jsonl"
    code, out, _ = call(capsys, "run", str(PROGRAMS / "flasher.itm"), "--format", "json", "--trace", str(trace), "--trace-steps", "3")
    report = json.loads(out)
    validate(report, "run-report")
    assert report["outcome"] == {"kind": "halted", "stage": "w", "output": "1|0"}
    events = [json.loads(line) for line in trace.read_text().splitlines()]
    for ev in events:
        validate(ev, "trace-event")
    assert [ev["event"] for ev in events] == ["step", "step", "step", "leap", "step", "halt"]
    assert [ev["stage"] for ev in events[3:]] == ["w", "w", "w"]


def test_run_oracle(capsys, tmp_path):
    src = tmp_path / "ask.itm"
    src.write_text(
        "tapes 4\nstart s\nlimit s\nhalt h\nquery q yes y no n\n"
        "s: default write **** move S goto q\n"
        "y: default write **1* move S goto h\n"
        "n: default write **** move S goto h\n"
    )
    _, yes, _ = call(capsys, "run", str(src), "--oracle", "finite:0|0")
    _, no, _ = call(capsys, "run", str(src), "--oracle", "cofinite:0|0")
    assert "output=1|0" in yes and "output=0|0" in no


def test_errors_exit_one(capsys, tmp_path):
    code, _, err = call(capsys, "run", str(tmp_path / "missing.itm"))
    assert code == 1 and err.startswith("error:")
    bad = tmp_path / "bad.itm"
    bad.write_text("start s\nlimit s\nhalt h\ns:\n  on 0** write *** move S goto h\n")
    code, _, err = call(capsys, "run", str(bad))
    assert code == 1 and "missing" in err
    code, _, err = call(capsys, "run", "--clock", "w^3")
    assert code == 1
    code, _, err = call(capsys, "run", "--clock", "w", "--input", "12")
    assert code == 1
    code, _, err = call(capsys, "run")
    assert code == 1 and "exactly one" in err


def test_assemble_and_clock(capsys, tmp_path):
    code, listing, _ = call(capsys, "assemble", str(PROGRAMS / "flasher.itm"))
    assert code == 0 and "on 010 write 000 move S goto start" in listing
    code, text, _ = call(capsys, "assemble", str(PROGRAMS / "flasher.itm"), "--json")
    validate(json.loads(text), "program")
    out = tmp_path / "p.json"
    out.write_text(text)
    code, line, _ = call(capsys, "run", str(out))
    assert line == "Halted stage=w output=1|0\n"
    clock = tmp_path / "c.itm"
    assert call(capsys, "clock", "w^2+w*3+2", "-o", str(clock))[0] == 0
    code, line, _ = call(capsys, "run", str(clock))
    assert line == "Halted stage=w^2+w*3+2 output=0|0\n"


@pytest.mark.parametrize(
    "pairs, verdict",
    [("0<1,1<2,0<2", "yes"), ("0<1,1<0", "no"), ("", "yes")],
)
def test_wo(capsys, pairs, verdict):
    code, out, _ = call(capsys, "wo", "--pairs", pairs)
    assert code == 0 and out.splitlines()[0] == f"well-order: {verdict}"


def test_halt_decide(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"start": "a", "halt": "H", "rules": [["a", 0, 1, "R", "a"], ["a", 1, 1, "S", "H"]]}))
    code, out, _ = call(capsys, "halt-decide", str(m))
    assert out.splitlines() == ["halts: no", "stage=w"]
    code, out, _ = call(capsys, "halt-decide", str(m), "--n", "1")
    assert out.splitlines()[0] == "halts: yes"
    m.write_text(json.dumps({"start": "a", "rules": []}))
    assert call(capsys, "halt-decide", str(m))[0] == 1


def test_encode(capsys):
    assert call(capsys, "encode", "--natural", "2")[1] == "11|0\n"
    assert call(capsys, "encode", "--pairs", "0<1")[1] == "001|0\n"
    assert call(capsys, "encode", "--pair", "0", "4")[1] == "14\n"
    assert call(capsys, "encode", "--unpair", "14")[1] == "0 4\n"


def test_census(capsys):
    code, text, _ = call(capsys, "census", "--states", "1")
    assert code == 0
    lines = text.splitlines()
    table = lines[lines.index("") + 2 :]
    stages = [row.split()[0] for row in table[: table.index("")]]
    assert "1" in stages and "w" in stages
    code, js, _ = call(capsys, "census", "--states", "1", "--json")
    data = json.loads(js)
    validate(data, "census")
    assert call(capsys, "census", "--states", "1", "--json")[1] == js


def test_console_script():
    exe = shutil.which("ittm") or None
    cmd = [exe] if exe else [sys.executable, "-m", "ittm.cli"]
    runs = [subprocess.run(cmd + ["run", "--clock", "w+2"], capture_output=True, text=True) for _ in range(2)]
    assert runs[0].returncode == 0 and runs[0].stdout == runs[1].stdout == "Halted stage=w+2 output=0|0\n"
