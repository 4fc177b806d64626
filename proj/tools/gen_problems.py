#!/usr/bin/env python3
"""Regenerates the bundled problem files under data/problems/."""

import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "data" / "problems"


def towers(blocks, rng):
    order = blocks[:]
    rng.shuffle(order)
    stacks = []
    for b in order:
        if stacks and rng.random() < 0.7:
            rng.choice(stacks).append(b)
        else:
            stacks.append([b])
    return stacks


def tower_facts(stacks):
    facts = []
    for s in stacks:
        facts.append(f"(ontable {s[0]})")
        for below, above in zip(s, s[1:]):
            facts.append(f"(on {above} {below})")
        facts.append(f"(clear {s[-1]})")
    return facts


def tower_goal(stacks):
    return [f"(on {above} {below})" for s in stacks for below, above in zip(s, s[1:])]


def blocksworld_problem(name, blocks, init, goal):
    lines = [f"(define (problem {name})", "  (:domain blocksworld)",
             f"  (:objects {' '.join(blocks)})",
             "  (:init (handempty)"]
    lines += [f"         {f}" for f in init]
    lines[-1] += ")"
    lines.append("  (:goal (and " + " ".join(goal) + ")))")
    return "\n".join(lines) + "\n"


def gen_blocksworld():
    out = ROOT / "blocksworld"
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240611)
    sizes = [3, 3, 4, 4, 4, 5, 5, 5, 6, 6]
    for i, n in enumerate(sizes, start=1):
        blocks = [f"b{k}" for k in range(1, n + 1)]
        while True:
            init, goal = towers(blocks, rng), towers(blocks, rng)
            goal_facts = tower_goal(goal)
            unmet = set(goal_facts) - set(tower_facts(init))
            if len(unmet) >= n - 2:
                break
        text = blocksworld_problem(f"bw-p{i:02d}", blocks, tower_facts(init), goal_facts)
        (out / f"p{i:02d}.pddl").write_text(text)
    sussman = blocksworld_problem(
        "sussman", ["a", "b", "c"],
        ["(on c a)", "(ontable a)", "(ontable b)", "(clear c)", "(clear b)"],
        ["(on a b)", "(on b c)"])
    (out / "sussman.pddl").write_text(sussman)
    figure = blocksworld_problem(
        "bw-figure", ["b1", "b2", "b3"],
        ["(on b2 b1)", "(ontable b1)", "(ontable b3)", "(clear b2)", "(clear b3)"],
        ["(on b1 b2)", "(on b2 b3)"])
    (out / "figure.pddl").write_text(figure)


def gen_gripper():
    out = ROOT / "gripper"
    out.mkdir(parents=True, exist_ok=True)
    for i, balls in enumerate([2, 3, 4, 5], start=1):
        names = [f"ball{k}" for k in range(1, balls + 1)]
        text = [f"(define (problem gripper-p{i:02d})", "  (:domain gripper)",
                "  (:objects rooma roomb - room",
                f"            {' '.join(names)} - ball",
                "            left right - gripper)",
                "  (:init (at-robby rooma) (free left) (free right)"]
        text += [f"         (at {b} rooma)" for b in names]
        text[-1] += ")"
        text.append("  (:goal (and " + " ".join(f"(at {b} roomb)" for b in names) + ")))")
        (out / f"p{i:02d}.pddl").write_text("\n".join(text) + "\n")


DRIVERLOG = [
    # (locations, links, paths, trucks, drivers, packages, goals)
    dict(locs=["s0", "s1", "s2"], links=[("s0", "s1"), ("s1", "s2"), ("s2", "s0")],
         paths=[("s0", "p0-1"), ("p0-1", "s1"), ("s1", "p1-2"), ("p1-2", "s2")],
         trucks={"truck1": "s0"},
         drivers={"driver1": "s1"}, packages={"package1": "s0", "package2": "s2"},
         goal={"driver1": "s1", "truck1": "s2", "package1": "s2", "package2": "s1"}),
    dict(locs=["s0", "s1", "s2"], links=[("s0", "s1"), ("s1", "s0"), ("s1", "s2"), ("s2", "s1")],
         paths=[("s0", "p0-2"), ("p0-2", "s2")], trucks={"truck1": "s2"},
         drivers={"driver1": "s0"}, packages={"package1": "s1", "package2": "s1"},
         goal={"package1": "s0", "package2": "s2"}),
    dict(locs=["s0", "s1", "s2", "s3"],
         links=[("s0", "s1"), ("s1", "s0"), ("s1", "s3"), ("s3", "s1"), ("s2", "s3"), ("s3", "s2")],
         paths=[("s0", "p0-1"), ("p0-1", "s1")], trucks={"truck1": "s0"},
         drivers={"driver1": "s1"}, packages={"package1": "s3", "package2": "s2"},
         goal={"driver1": "s0", "package1": "s0", "package2": "s1"}),
    dict(locs=["s0", "s1", "s2"], links=[("s0", "s1"), ("s1", "s0"), ("s1", "s2"), ("s2", "s1")],
         paths=[("s0", "p0-1"), ("p0-1", "s1"), ("s1", "p1-2"), ("p1-2", "s2")],
         trucks={"truck1": "s0", "truck2": "s2"},
         drivers={"driver1": "s1", "driver2": "s2"},
         packages={"package1": "s0", "package2": "s2", "package3": "s1"},
         goal={"driver1": "s0", "truck1": "s1", "package1": "s2", "package2": "s0", "package3": "s2"}),
]


def gen_driverlog():
    out = ROOT / "driverlog"
    out.mkdir(parents=True, exist_ok=True)
    for i, spec in enumerate(DRIVERLOG, start=1):
        path_locs = sorted({x for p in spec["paths"] for x in p if x not in spec["locs"]})
        text = [f"(define (problem driverlog-p{i:02d})", "  (:domain driverlog)",
                "  (:objects " + " ".join(spec["drivers"]) + " - driver",
                "            " + " ".join(spec["trucks"]) + " - truck",
                "            " + " ".join(spec["packages"]) + " - obj",
                "            " + " ".join(spec["locs"] + path_locs) + " - location)",
                "  (:init"]
        for d, loc in spec["drivers"].items():
            text.append(f"    (at {d} {loc})")
        for t, loc in spec["trucks"].items():
            text += [f"    (at {t} {loc})", f"    (empty {t})"]
        for p, loc in spec["packages"].items():
            text.append(f"    (at {p} {loc})")
        for a, b in spec["paths"]:
            text += [f"    (path {a} {b})", f"    (path {b} {a})"]
        for a, b in spec["links"]:
            text.append(f"    (link {a} {b})")
        text[-1] += ")"
        goal = " ".join(f"(at {k} {v})" for k, v in spec["goal"].items())
        text.append(f"  (:goal (and {goal})))")
        (out / f"p{i:02d}.pddl").write_text("\n".join(text) + "\n")


def gen_trap():
    out = ROOT / "trap"
    out.mkdir(parents=True, exist_ok=True)
    for i, (corridor, lamps, passage) in enumerate([(3, 2, 12), (4, 2, 16), (4, 3, 16), (5, 3, 20)],
                                                   start=1):
        cells = [f"c{k}" for k in range(corridor + 1)]
        side = [f"t{k}" for k in range(1, passage + 1)]
        lamp_names = [f"l{k}" for k in range(1, lamps + 1)]
        text = [f"(define (problem trap-p{i:02d})", "  (:domain trap)",
                "  (:objects " + " ".join(cells + side) + " - cell",
                "            " + " ".join(lamp_names) + " - lamp)",
                "  (:init (at c0)", f"    (exit {cells[-1]})", f"    (adj c0 t1)"]
        for a, b in zip(cells, cells[1:]):
            text += [f"    (adj {a} {b})", f"    (adj {b} {a})"]
        for a, b in zip(side, side[1:]):
            text += [f"    (adj {a} {b})", f"    (adj {b} {a})"]
        text += [f"    (passage {t})" for t in side]
        text[-1] += ")"
        goal = " ".join([f"(lit {l})" for l in lamp_names] + [f"(at {cells[-1]})"])
        text.append(f"  (:goal (and {goal})))")
        (out / f"p{i:02d}.pddl").write_text("\n".join(text) + "\n")


if __name__ == "__main__":
    gen_blocksworld()
    gen_gripper()
    gen_driverlog()
    gen_trap()
