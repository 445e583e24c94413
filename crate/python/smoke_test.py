#!/usr/bin/env python3
"""Smoke test for the burl_py extension module.

Builds the level-3 scene, drives the whole pipeline through the bindings,
and checks the known exact values. Run from the repository root:

    cargo build -p burl-py
    python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import sys
import tempfile


def import_burl_py():
    """Import burl_py from the cargo build tree (no install step needed)."""
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("libburl_py.so", "burl_py.so", "libburl_py.dylib", "burl_py.pyd")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("burl_py is not built; run `cargo build -p burl-py` first")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="burl-py-"))
    suffix = ".pyd" if built.suffix == ".pyd" else ".so"
    shutil.copy2(built, stage / f"burl_py{suffix}")
    sys.path.insert(0, str(stage))
    import burl_py

    return burl_py


def main():
    bp = import_burl_py()

    scene = bp.generate("frame", 3)
    assert scene.level == 3, scene.level
    assert scene.shape_count == 13, scene.shape_count
    assert scene.prob_count == 8, scene.prob_count
    assert scene.constraints_pass(), "level-3 family must satisfy (C1)-(C6)"
    assert scene.stability_report() == [], "every generated prob must be stable"

    # Every coordinate crosses the boundary as an exact rational string.
    for _, rects in scene.shapes():
        for rect in rects:
            assert all(isinstance(c, str) for c in rect), rect

    og = scene.graph()
    assert og.n == 13 and og.arc_count == 11, (og.n, og.arc_count)
    cert = json.loads(og.recognize())
    assert cert["verdict"] == "accepted", cert

    g = og.underlying()
    assert g.triangle_free(), "generated graphs are triangle-free"
    assert g.clique_number() == 2, g.clique_number()
    chi = g.chromatic_number()
    assert chi == 3, chi

    sub = g.induced_subgraph(g.vertex_ids()[:5])
    assert sub.n == 5
    assert json.loads(sub.recognize())["verdict"] == "accepted", "hereditary class"

    triangle = bp.Graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert not triangle.triangle_free()
    assert json.loads(triangle.recognize())["verdict"] == "rejected"
    assert triangle.chromatic_number() == 3

    # Documents round-trip bit-exactly through Python.
    scene_json = scene.to_json()
    reloaded = bp.Scene.from_json(scene_json)
    assert reloaded.to_json() == scene_json, "scene JSON must be stable"
    graph_json = og.to_json()
    assert bp.OrientedGraph.from_json(graph_json).to_json() == graph_json

    svg = scene.svg(territories=True)
    assert svg.startswith("<svg ") and "url(#hatch)" in svg
    assert og.dot().startswith("digraph {")

    print("smoke test passed:", scene, og, g)


if __name__ == "__main__":
    main()
