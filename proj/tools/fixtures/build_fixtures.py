#!/usr/bin/env python3
"""Regenerates the fixture corpus under fixtures/.

Each package release is written to a scratch directory and published with
`updcheck registry publish`, so the snapshots carry the same digests a real
registry would. Client projects and expected.json are written in place.

usage: build_fixtures.py <path-to-updcheck> [fixtures-dir]
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

LISTING1_P1_V1 = """package p1;

class A {
    static fn a() -> int {
        return 0;
    }

    static fn v(a: int) -> bool {
        if (a > 0) {
            return true;
        }
        return false;
    }

    static fn w(n: int) -> int {
        return n * 2;
    }
}
"""

LISTING1_P1_V2 = LISTING1_P1_V1.replace("return 0;", "return 1;").replace("a > 0", "a == 0")

LISTING1_P2_V1 = """package p2;
import p1;

class B {
    static fn b() -> int {
        var y: int = 1;
        if (A.v(y)) {
            y = y + 2;
        }
        var x: int = A.a();
        if (x > 0) {
            return 0;
        }
        return x + y;
    }

    static fn z() -> bool {
        return false;
    }
}
"""

LISTING1_P2_V2 = LISTING1_P2_V1.replace(
    """    static fn z() -> bool {
        return false;
    }
""",
    """    static fn z() -> bool {
        return make_false();
    }

    static fn make_false() -> bool {
        return false;
    }
""")

P2_RANGE = {"p2": ">=1.0.0 <2.0.0"}
P1_RANGE = {"p1": ">=1.0.0 <2.0.0"}

LISTING1 = {
    "description": "Two-library chain client -> p2 -> p1. p1 2.0.0 changes A.a and A.v, "
                   "which the client reaches through p2.B.b; p2 2.0.0 refactors B.z without "
                   "changing behaviour.",
    "releases": [
        ("p1", "1.0.0", {}, {"src/A.ml0": LISTING1_P1_V1}),
        ("p1", "2.0.0", {}, {"src/A.ml0": LISTING1_P1_V2}),
        ("p2", "1.0.0", P1_RANGE, {"src/B.ml0": LISTING1_P2_V1}),
        ("p2", "2.0.0", P1_RANGE, {"src/B.ml0": LISTING1_P2_V2}),
    ],
    "projects": {
        "client": (P2_RANGE, {
            "src/Main.ml0": """package client;
import p2;

class Main {
    static fn main() -> int {
        var total: int = B.b();
        if (B.z()) {
            total = 0;
        }
        return total;
    }
}
""",
            "test/main_test.ml0": """package client;

fn test_b() {
    assert Main.main() == 3;
}
""",
        }),
        "client2": ({**P2_RANGE, **P1_RANGE}, {
            "src/Main.ml0": """package client2;
import p1;

class Main {
    static fn main() -> int {
        return A.w(2);
    }
}
""",
            "test/main_test.ml0": """package client2;

fn test_main() {
    assert Main.main() == 4;
}
""",
        }),
        "client_single": (P2_RANGE, {
            "src/Main.ml0": """package client_single;
import p2;

class Main {
    static fn main() -> int {
        if (B.z()) {
            return 0;
        }
        return run_b();
    }

    static fn run_b() -> int {
        return B.b();
    }
}
""",
            "test/main_test.ml0": """package client_single;

fn test_b() {
    assert Main.run_b() == 3;
}
""",
        }),
        "client_nouse": (P2_RANGE, {
            "src/Main.ml0": """package client_nouse;

class Main {
    static fn main() -> int {
        return 7;
    }
}
""",
            "test/main_test.ml0": """package client_nouse;

fn test_main() {
    assert Main.main() == 7;
}
""",
        }),
    },
    "scenarios": [
        {"name": "p1-update-reaches-client", "kind": "check-update", "project": "client",
         "package": "p1", "to": "2.0.0", "provenance": "worked-example",
         "expect": {"verdict": "Unsafe", "impacted": ["p1.A.a", "p1.A.v"],
                    "stacks": [["client.Main.main", "p2.B.b", "p1.A.a"],
                               ["client.Main.main", "p2.B.b", "p1.A.v"]]}},
        {"name": "p1-update-breaks-client-test", "kind": "test", "project": "client",
         "with": {"p1": "2.0.0"}, "provenance": "worked-example",
         "expect": {"all_passed": False, "failed": ["client.test_b"]}},
        {"name": "p1-update-safe-for-client2", "kind": "check-update", "project": "client2",
         "package": "p1", "to": "2.0.0", "provenance": "worked-example",
         "expect": {"verdict": "Safe", "impacted": []}},
        {"name": "p2-refactor-flagged", "kind": "check-update", "project": "client",
         "package": "p2", "to": "2.0.0", "provenance": "worked-example",
         "expect": {"verdict": "Unsafe", "impacted": ["p2.B.z"],
                    "stacks": [["client.Main.main", "p2.B.z"]]}},
        {"name": "p2-refactor-keeps-tests-green", "kind": "test", "project": "client",
         "with": {"p2": "2.0.0"}, "provenance": "worked-example",
         "expect": {"all_passed": True, "failed": []}},
        {"name": "self-update-is-safe", "kind": "check-update", "project": "client",
         "package": "p1", "to": "1.0.0", "provenance": "trivial",
         "expect": {"verdict": "Safe", "changed_functions": 0}},
        {"name": "baseline-green", "kind": "test", "project": "client", "provenance": "derived",
         "expect": {"all_passed": True}},
        {"name": "coverage-full", "kind": "coverage", "project": "client",
         "provenance": "derived", "expect": {"direct_ratio": 1.0, "transitive_ratio": 1.0}},
        {"name": "coverage-single-test", "kind": "coverage", "project": "client_single",
         "provenance": "derived", "expect": {"direct_ratio": 0.5, "transitive_ratio": 0.75}},
        {"name": "coverage-no-use", "kind": "coverage", "project": "client_nouse",
         "provenance": "trivial", "expect": {"direct_ratio": None, "transitive_ratio": None}},
        {"name": "bench-static-complete", "kind": "bench", "project": "client",
         "provenance": "derived", "expect": {"static_score": 1.0}},
    ],
}

UTIL_V1 = """package util;

class Strings {
    static fn pad(n: int, width: int) -> int {
        if (n < width) {
            return width;
        }
        return n;
    }
}
"""

UNUSED_DEP = {
    "description": "The app declares util but never calls it; any util update is Unused.",
    "releases": [
        ("util", "1.0.0", {}, {"src/Strings.ml0": UTIL_V1}),
        ("util", "1.1.0", {}, {"src/Strings.ml0": UTIL_V1.replace("n < width", "n <= width")}),
    ],
    "projects": {
        "app": ({"util": "1.0.0"}, {
            "src/App.ml0": """package app;

class App {
    static fn answer() -> int {
        return 6 * 7;
    }
}
""",
            "test/app_test.ml0": """package app;

fn test_answer() {
    assert App.answer() == 42;
}
""",
        }),
    },
    "scenarios": [
        {"name": "util-update-unused", "kind": "check-update", "project": "app",
         "package": "util", "to": "1.1.0", "provenance": "worked-example",
         "expect": {"verdict": "Unused", "impacted": []}},
        {"name": "tests-green-under-update", "kind": "test", "project": "app",
         "with": {"util": "1.1.0"}, "provenance": "trivial",
         "expect": {"all_passed": True}},
        {"name": "coverage-no-use", "kind": "coverage", "project": "app",
         "provenance": "trivial", "expect": {"direct_ratio": None}},
    ],
}

MATHLIB_V1 = """package mathlib;

class Calc {
    static fn clamp(x: int, lo: int, hi: int) -> int {
        if (x < lo) {
            return lo;
        }
        if (x > hi) {
            return hi;
        }
        return x;
    }

    static fn mix(a: int, b: int) -> int {
        var s: int = a + b;
        var d: int = a - b;
        return s * 3 + d;
    }

    static fn both(p: bool, q: bool) -> bool {
        return p && q || !p && !q;
    }

    static fn sign(x: int) -> int {
        if (x > 0) {
            return 1;
        }
        if (x == 0) {
            return 0;
        }
        return -1;
    }
}
"""

WEAK_TEST = {
    "description": "The client's tests exercise mathlib but assert nothing, so almost every "
                   "mutant survives them while static analysis flags all of them.",
    "releases": [
        ("mathlib", "1.0.0", {}, {"src/Calc.ml0": MATHLIB_V1}),
        ("mathlib", "1.1.0", {}, {"src/Calc.ml0": MATHLIB_V1.replace("s * 3 + d", "s * 3 - d")}),
    ],
    "projects": {
        "client": ({"mathlib": "1.0.0"}, {
            "src/Report.ml0": """package client;
import mathlib;

class Report {
    static fn score(a: int, b: int) -> int {
        var m: int = Calc.mix(a, b);
        return Calc.clamp(m, 0, 100) + Calc.sign(a - b);
    }

    static fn agree(p: bool, q: bool) -> bool {
        return Calc.both(p, q);
    }
}
""",
            "test/report_test.ml0": """package client;

fn test_score() {
    var s: int = Report.score(7, 3);
    std.print(s);
}

fn test_agree() {
    var a: bool = Report.agree(true, false);
}
""",
        }),
    },
    "scenarios": [
        {"name": "baseline-green", "kind": "test", "project": "client",
         "provenance": "trivial", "expect": {"all_passed": True}},
        {"name": "mix-update-reachable", "kind": "check-update", "project": "client",
         "package": "mathlib", "to": "1.1.0", "provenance": "derived",
         "expect": {"verdict": "Unsafe", "impacted": ["mathlib.Calc.mix"]}},
        {"name": "tests-miss-static-catches", "kind": "bench", "project": "client",
         "provenance": "derived",
         "expect": {"static_score": 1.0, "test_score_below": 0.5}},
    ],
}

SHAPES_V1 = """package shapes;

interface Shape {
    fn area() -> int;
}

class Circle implements Shape {
    var r: int;

    fn area() -> int {
        return 3 * self.r * self.r;
    }
}

class Square implements Shape {
    var s: int;

    fn area() -> int {
        return self.s * self.s;
    }
}

class Geometry {
    static fn total(a: Shape, b: Shape) -> int {
        return a.area() + b.area();
    }
}
"""

DISPATCH = {
    "description": "Interface dispatch: the client only ever builds Circles, but class "
                   "hierarchy analysis links every Shape call to Square.area as well.",
    "releases": [
        ("shapes", "1.0.0", {}, {"src/Shapes.ml0": SHAPES_V1}),
        ("shapes", "1.1.0", {}, {"src/Shapes.ml0": SHAPES_V1.replace(
            "return self.s * self.s;", "return self.s * self.s * 2;")}),
    ],
    "projects": {
        "client": ({"shapes": "1.0.0"}, {
            "src/Main.ml0": """package client;
import shapes;

class Main {
    static fn disc(r: int) -> Circle {
        var c: Circle = new Circle();
        c.r = r;
        return c;
    }

    static fn main() -> int {
        return Geometry.total(disc(1), disc(2));
    }
}
""",
            "test/main_test.ml0": """package client;

fn test_main() {
    assert Main.main() == 15;
}
""",
        }),
    },
    "scenarios": [
        {"name": "square-update-over-approximated", "kind": "check-update", "project": "client",
         "package": "shapes", "to": "1.1.0", "provenance": "worked-example",
         "expect": {"verdict": "Unsafe", "impacted": ["shapes.Square.area"],
                    "stacks": [["client.Main.main", "shapes.Geometry.total",
                                "shapes.Square.area"]]}},
        {"name": "tests-green-under-update", "kind": "test", "project": "client",
         "with": {"shapes": "1.1.0"}, "provenance": "derived",
         "expect": {"all_passed": True}},
        {"name": "coverage", "kind": "coverage", "project": "client", "provenance": "derived",
         "expect": {"direct_ratio": 1.0, "transitive_ratio": 2 / 3}},
        {"name": "bench-static-complete", "kind": "bench", "project": "client",
         "provenance": "derived", "expect": {"static_score": 1.0}},
    ],
}

FIXTURES = {"listing1": LISTING1, "unused_dep": UNUSED_DEP, "weak_test": WEAK_TEST,
            "dispatch": DISPATCH}


def write_package(dir: Path, name: str, version: str, deps: dict, files: dict) -> None:
    manifest = {
        "name": name,
        "version": version,
        "dependencies": deps,
        "sources": sorted(p for p in files if not p.startswith("test/")),
        "tests": sorted(p for p in files if p.startswith("test/")),
    }
    dir.mkdir(parents=True, exist_ok=True)
    (dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    for path, text in files.items():
        (dir / path).parent.mkdir(parents=True, exist_ok=True)
        (dir / path).write_text(text)


def build(tool: str, root: Path, name: str, spec: dict) -> None:
    out = root / name
    if out.exists():
        shutil.rmtree(out)
    registry = out / "registry"
    with tempfile.TemporaryDirectory() as scratch:
        for pkg, version, deps, files in spec["releases"]:
            stage = Path(scratch) / f"{pkg}-{version}"
            write_package(stage, pkg, version, deps, files)
            subprocess.run([tool, "--registry", str(registry), "registry", "publish", "--init",
                            str(stage)], check=True, stdout=subprocess.DEVNULL)
    for lock in registry.glob("*/.lock"):
        lock.unlink()
    for project, (deps, files) in spec["projects"].items():
        write_package(out / "projects" / project, project, "1.0.0", deps, files)
    packages = {}
    for pkg, version, _, _ in spec["releases"]:
        packages.setdefault(pkg, []).append(version)
    expected = {
        "schema_version": 1,
        "name": name,
        "description": spec["description"],
        "packages": packages,
        "projects": list(spec["projects"]),
        "scenarios": spec["scenarios"],
    }
    (out / "expected.json").write_text(json.dumps(expected, indent=2) + "\n")


def main() -> None:
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    tool = sys.argv[1]
    root = Path(sys.argv[2] if len(sys.argv) > 2 else Path(__file__).resolve().parents[2] / "fixtures")
    for name, spec in FIXTURES.items():
        build(tool, root, name, spec)
        print(f"built {root / name}")


if __name__ == "__main__":
    main()
