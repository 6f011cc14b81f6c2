"""End-to-end checks of the puzzleboard command-line tool.

Run through ctest, which sets PUZZLEBOARD_BIN, PUZZLEBOARD_DOCS and
PUZZLEBOARD_RINGS.
"""

import csv
import io
import json
import math
import os
import pathlib
import re
import subprocess

import jsonschema
import pytest
import referencing

BIN = os.environ["PUZZLEBOARD_BIN"]
DOCS = pathlib.Path(os.environ["PUZZLEBOARD_DOCS"])
RINGS = pathlib.Path(os.environ["PUZZLEBOARD_RINGS"])


def run(*args, env=None, check=None):
    full_env = {k: v for k, v in os.environ.items() if k != "PUZZLEBOARD_CONFIG"}
    full_env.update(env or {})
    proc = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=full_env, timeout=600)
    if check is not None:
        assert proc.returncode == check, proc.stderr
    return proc


def schema_validator(name):
    schemas = {p.name: json.loads(p.read_text()) for p in DOCS.glob("*.schema.json")}
    registry = referencing.Registry().with_resources(
        (name_, referencing.Resource.from_contents(s)) for name_, s in schemas.items()
    )
    registry = registry.with_resources((s["$id"], referencing.Resource.from_contents(s)) for s in schemas.values())
    return jsonschema.Draft202012Validator(schemas[name], registry=registry)


def write_pgm(path, width, height, value):
    path.write_bytes(b"P5\n%d %d\n255\n" % (width, height) + bytes([value]) * (width * height))


@pytest.fixture(scope="module")
def render5(tmp_path_factory):
    d = tmp_path_factory.mktemp("render5")
    image = d / "target.pgm"
    run("render", "--extent", 22, 15, "--origin", 123, 45, "--px-per-edge", 5, "-o", image, check=0)
    return image, json.loads((d / "target.pgm.json").read_text())


def matches_truth(component, truth, radius=1.5):
    wrong = 0
    for c in component["corners"]:
        best = min(truth["corners"], key=lambda t: math.hypot(t["u"] - c["u"], t["v"] - c["v"]))
        if math.hypot(best["u"] - c["u"], best["v"] - c["v"]) > radius or (best["x"], best["y"]) != (c["x"], c["y"]):
            wrong += 1
    return wrong


# generate


@pytest.mark.parametrize("extent", [(0, 5), (5, 0), (502, 3), (-1, 4)])
def test_generate_rejects_windows_outside_the_board(extent, tmp_path):
    proc = run("generate", "--extent", *extent, "-o", tmp_path / "t.svg", check=2)
    assert not (tmp_path / "t.svg").exists()
    assert "extent" in proc.stderr or "--extent" in proc.stderr


def test_generate_rejects_origin_outside_the_board(tmp_path):
    run("generate", "--extent", 3, 3, "--origin", 501, 0, "-o", tmp_path / "t.svg", check=2)


def test_generate_mid_size_target(tmp_path):
    out = tmp_path / "t.svg"
    run("generate", "--extent", 15, 22, "--edge-mm", 12.5, "-o", out, check=0)
    svg = out.read_text()
    assert svg.count('class="black"') + svg.count('class="white"') == 17 * 24
    # One dot per lattice edge of the 16 x 23 corner lattice.
    assert svg.count("<circle") == 15 * 23 + 16 * 22
    width = float(re.search(r'width="([0-9.]+)mm"', svg).group(1))
    assert width == pytest.approx(12.5 * (17 + 2))


def test_generate_full_board(tmp_path):
    out = tmp_path / "full.svg"
    run("generate", "--extent", 501, 501, "-o", out, check=0)
    svg = out.read_text()
    assert svg.count("<circle") == 2 * 501 * 502


def test_generate_is_deterministic_and_writes_png(tmp_path):
    run("generate", "--extent", 7, 10, "--origin", 11, 400, "-o", tmp_path / "a.svg", check=0)
    run("generate", "--extent", 7, 10, "--origin", 11, 400, "-o", tmp_path / "b.svg", check=0)
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    run("generate", "--extent", 7, 10, "--px-per-edge", 8, "-o", tmp_path / "t.png", check=0)
    assert (tmp_path / "t.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_generate_png_needs_a_file():
    run("generate", "--extent", 3, 3, "--format", "png", check=2)


# render


def test_render_sidecar(render5):
    image, truth = render5
    schema_validator("render-truth.schema.json").validate(truth)
    assert truth["cornerCount"] == len(truth["corners"]) == 23 * 16
    sx, sy = truth["squares"]
    assert truth["cornerCount"] == (sx - 1) * (sy - 1)
    assert {(c["i"], c["j"]) for c in truth["corners"]} == {(i, j) for i in range(23) for j in range(16)}
    c0 = next(c for c in truth["corners"] if (c["i"], c["j"]) == (0, 0))
    assert (c0["x"], c0["y"]) == (123, 45)
    w, h = truth["imageSize"]
    assert image.read_bytes().startswith(b"P5\n%d %d\n255\n" % (w, h))


def test_render_rotated_and_deterministic(tmp_path):
    args = ["render", "--extent", 22, 15, "--px-per-edge", 5, "--rotation", 22.5, "--noise", 0.02, "--seed", 3]
    run(*args, "-o", tmp_path / "a.pgm", check=0)
    run(*args, "-o", tmp_path / "b.pgm", check=0)
    assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()
    truth = json.loads((tmp_path / "a.pgm.json").read_text())
    assert truth["cornerCount"] == 23 * 16


def test_render_rejects_degenerate_homography(tmp_path):
    proc = run("render", "--homography", 1, 2, 0, 2, 4, 0, 0, 0, 1, "--size", 64, 64, "-o", tmp_path / "d.pgm", check=2)
    assert "singular" in proc.stderr
    run("render", "--homography", 10, 0, 5, 0, 10, 5, 0, 0, 1, "--px-per-edge", 4, "--size", 64, 64,
        "-o", tmp_path / "e.pgm", check=2)


def test_render_explicit_homography(tmp_path):
    run("render", "--extent", 4, 4, "--homography", 10, 0, 20, 0, 10, 20, 0, 0, 1, "--size", 80, 80,
        "-o", tmp_path / "h.pgm", check=0)
    truth = json.loads((tmp_path / "h.pgm.json").read_text())
    c = next(c for c in truth["corners"] if (c["i"], c["j"]) == (2, 3))
    assert (c["u"], c["v"]) == pytest.approx((40.0, 50.0))


# detect


def test_detect_render(render5, tmp_path):
    image, truth = render5
    out = tmp_path / "d.json"
    overlay = tmp_path / "overlay.pgm"
    response = tmp_path / "response.pgm"
    run("detect", image, "--json", out, "--debug-overlay", overlay, "--response-dump", response, check=0)
    result = json.loads(out.read_text())
    schema_validator("detection.schema.json").validate(result)
    assert result["schemaVersion"] == 1
    assert result["image"] == str(image)
    assert len(result["components"]) == 1
    comp = result["components"][0]
    assert comp["status"] == "decoded"
    assert len(comp["corners"]) == 368
    assert matches_truth(comp, truth) == 0
    c0 = next(c for c in comp["corners"] if (c["i"], c["j"]) == (0, 0))
    assert comp["origin"] == [c0["x"], c0["y"]]
    header = b"P5\n%d %d\n255\n" % tuple(truth["imageSize"])
    assert overlay.read_bytes().startswith(header)
    assert response.read_bytes().startswith(header)


def test_detect_stdout_is_json(render5):
    image, _ = render5
    proc = run("detect", image, check=0)
    assert json.loads(proc.stdout)["components"]


def test_detect_blank_image(tmp_path):
    blank = tmp_path / "blank.pgm"
    write_pgm(blank, 64, 48, 200)
    proc = run("detect", blank, check=1)
    result = json.loads(proc.stdout)
    schema_validator("detection.schema.json").validate(result)
    assert result["components"] == [] and result["cornerCount"] == 0


def test_detect_io_errors(tmp_path):
    run("detect", tmp_path / "missing.pgm", check=2)
    junk = tmp_path / "junk.pgm"
    junk.write_text("this is not an image")
    run("detect", junk, check=2)
    run("detect", check=2)


def test_detect_plain_board_reports_no_positions(tmp_path):
    image = tmp_path / "plain.pgm"
    run("render", "--extent", 8, 6, "--px-per-edge", 10, "--plain", "-o", image, check=0)
    proc = run("detect", image, check=1)
    result = json.loads(proc.stdout)
    assert sum(len(c["corners"]) for c in result["components"]) == 9 * 7
    for comp in result["components"]:
        assert comp["status"] in ("ambiguous", "insufficient_code")
        assert comp["origin"] is None
        assert all(c["x"] is None and c["y"] is None for c in comp["corners"])


def test_config_file_and_environment(render5, tmp_path):
    image, _ = render5
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"smoothSigma": 1.2, "threads": 2}))
    proc = run("detect", "--print-config", env={"PUZZLEBOARD_CONFIG": str(cfg)}, check=0)
    printed = json.loads(proc.stdout)
    schema_validator("config.schema.json").validate(printed)
    assert printed["smoothSigma"] == 1.2 and printed["threads"] == 2
    # Flags override the file, an explicit --config overrides the environment.
    proc = run("detect", "--print-config", "--threads", 3, env={"PUZZLEBOARD_CONFIG": str(cfg)}, check=0)
    assert json.loads(proc.stdout)["threads"] == 3
    other = tmp_path / "other.json"
    other.write_text("{}")
    proc = run("detect", "--print-config", "--config", other, env={"PUZZLEBOARD_CONFIG": str(cfg)}, check=0)
    assert json.loads(proc.stdout)["smoothSigma"] == 1.0
    proc = run("detect", image, env={"PUZZLEBOARD_CONFIG": str(cfg)}, check=0)
    assert json.loads(proc.stdout)["config"]["smoothSigma"] == 1.2


@pytest.mark.parametrize("bad", ['{"smoothSigma": -1}', '{"nope": 1}', '{"threads": 1.5}', "not json"])
def test_bad_config_is_a_usage_error(bad, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(bad)
    run("detect", "--print-config", "--config", cfg, check=2)
    run("detect", "--print-config", "--config", tmp_path / "missing.json", check=2)


def test_defaults_match_config_schema():
    printed = json.loads(run("detect", "--print-config", check=0).stdout)
    schema = json.loads((DOCS / "config.schema.json").read_text())
    assert set(printed) == set(schema["properties"])
    for key, value in printed.items():
        assert schema["properties"][key]["default"] == pytest.approx(value), key


# bench


def bench_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def documented_header():
    doc = (DOCS / "formats.md").read_text()
    return re.search(r"```\n(sweep,[^\n]+)\n```", doc).group(1)


def test_bench_resolution_sweep():
    proc = run("bench", "--sizes", "116x87,232x174,320x240", "--repeats", 10, check=0)
    assert proc.stdout.splitlines()[0] == documented_header()
    rows = bench_rows(proc.stdout)
    assert [r["label"] for r in rows] == ["116x87", "232x174", "320x240"]
    for r in rows:
        assert r["repeats"] == "10" and r["flag"] == ""
        for stage in ("response", "corners", "grid", "decode", "total"):
            lo, mean, hi = (float(r[f"{stage}_{s}_ms"]) for s in ("min", "mean", "max"))
            assert 0 <= lo <= mean <= hi


def test_bench_single_repeat_is_flagged():
    rows = bench_rows(run("bench", "--sweep", "corners", "--frame", 400, 300, "--visible", "1,0.5", "--repeats", 1,
                          check=0).stdout)
    assert [r["flag"] for r in rows] == ["few_repeats", "few_repeats"]
    assert int(rows[0]["corners"]) > int(rows[1]["corners"])


def test_bench_rejects_bad_sweeps():
    run("bench", "--sizes", "12by3", check=2)
    run("bench", "--repeats", 0, check=2)
    run("bench", "--sweep", "corners", "--sizes", "100x100", check=2)


# rings


def test_rings_verify_shipped_pair():
    proc = run("rings", "--verify", check=0)
    assert "FAIL" not in proc.stdout
    assert "0 of 1004004 keys collide" in proc.stdout
    assert "251001/251001" in proc.stdout


def test_rings_tampered_file(tmp_path):
    lines = (RINGS / "ring_a.txt").read_text().splitlines()
    row = next(i for i, l in enumerate(lines) if l and not l.startswith("#"))
    lines[row] = ("1" if lines[row][0] == "0" else "0") + lines[row][1:]
    tampered = tmp_path / "ring_a.txt"
    tampered.write_text("\n".join(lines) + "\n")
    proc = run("rings", "--verify", "--ring-a", tampered, "--ring-b", RINGS / "ring_b.txt", check=1)
    assert "FAIL" in proc.stdout
    short = tmp_path / "short.txt"
    short.write_text("0101\n")
    run("rings", "--ring-a", short, "--ring-b", RINGS / "ring_b.txt", check=1)
    run("rings", "--ring-a", tmp_path / "missing.txt", "--ring-b", RINGS / "ring_b.txt", check=2)


def test_rings_verify_shipped_files():
    run("rings", "--ring-a", RINGS / "ring_a.txt", "--ring-b", RINGS / "ring_b.txt", check=0)


def test_rings_regenerate_is_deterministic(tmp_path):
    for name in ("a", "b"):
        run("rings", "--regenerate", "--seed", 7, "--iterations", 200, "--out-dir", tmp_path / name, check=0)
    for ring in ("ring_a.txt", "ring_b.txt"):
        assert (tmp_path / "a" / ring).read_bytes() == (tmp_path / "b" / ring).read_bytes()
    run("rings", "--ring-a", tmp_path / "a" / "ring_a.txt", "--ring-b", tmp_path / "a" / "ring_b.txt", check=0)


def test_rings_flag_combinations():
    run("rings", "--seed", 3, check=2)
    run("rings", "--regenerate", "--verify", check=2)
    run("rings", "--ring-a", RINGS / "ring_a.txt", check=2)


def test_exactly_one_subcommand():
    run(check=2)
    run("frobnicate", check=2)
    assert run("--help", check=0).stdout
