#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the problem files under tests/data.

desk.jsonl        eight problems that each need one auxiliary construction,
                  with a goal annotation for the rule prover and a gold proof
gold.jsonl        the desk problems plus two more, all with gold proofs
composition.jsonl 390 minimal problems: 201 numerical, 108 ratio, 81 descriptor
"""
import json
import math
from pathlib import Path

HERE = Path(__file__).resolve().parent
S3 = math.sqrt(3.0)


def pt(name, x, y):
    return {"name": name, "x": x, "y": y}


def rel(kind, *args, value=None):
    r = {"type": kind, "args": list(args)}
    if value is not None:
        r["value"] = value
    return r


def poly(*labels):
    return {"type": "polygon", "points": list(labels)}


def line(a, b):
    return {"type": "line", "points": [a, b]}


def form(points, objects, relations, goal=None):
    f = {"points": points, "objects": objects, "relations": relations}
    if goal:
        f["annotations"] = {"goal": goal}
    return f


def step(reasoning, action):
    return {"reasoning": reasoning, "action": action}


def answer(kind, value, unit=None):
    a = {"op": "answer", "type": kind, "value": value}
    if unit:
        a["unit"] = unit
    return a


def problem(pid, text, f, answer_type, gold, proof, unit=None, aliases=None):
    p = {"id": pid, "text": text, "form": f, "answer_type": answer_type, "answer": gold, "gold_proof": proof}
    if unit:
        p["unit"] = unit
    if aliases:
        p["aliases"] = aliases
    return p


def desk():
    out = []

    # Isosceles triangle, median to the base.
    iso = [pt("A", 0.0, 4.0), pt("B", -3.0, 0.0), pt("C", 3.0, 0.0), pt("M", 0.0, 0.0)]
    out.append(problem(
        "desk-median-perpendicular",
        "In triangle ABC, AB = AC and M is the midpoint of BC. How is AM related to BC?",
        form(iso, [poly("A", "B", "C")], [rel("equal_length", "A", "B", "A", "C"), rel("midpoint", "M", "B", "C")],
             "relation A M B C"),
        "descriptor", "perpendicular",
        [step("Join A to M to split the triangle into two halves.", {"op": "draw_line", "from": "A", "to": "M"}),
         step("ABM and ACM are congruent (SSS), so the angles at M are equal and supplementary.",
              answer("descriptor", "perpendicular"))],
        aliases=["at right angles"]))

    # Same figure with a given base angle.
    h = math.tan(math.radians(50.0))
    iso50 = [pt("A", 0.0, h), pt("B", -1.0, 0.0), pt("C", 1.0, 0.0), pt("M", 0.0, 0.0)]
    out.append(problem(
        "desk-half-apex",
        "In triangle ABC, AB = AC, angle ABC = 50 degrees and M is the midpoint of BC. Find angle BAM.",
        form(iso50, [poly("A", "B", "C")],
             [rel("equal_length", "A", "B", "A", "C"), rel("midpoint", "M", "B", "C"),
              rel("fixed_angle", "A", "B", "C", value=50.0)],
             "angle B A M"),
        "numerical", 40, [
            step("Draw the median AM.", {"op": "draw_line", "from": "A", "to": "M"}),
            step("The median is perpendicular to BC, so angle BAM = 180 - 90 - 50.", answer("numerical", 40, "degree"))],
        unit="degree"))

    # Equilateral triangles ABD and BCE on a line through A, B, C.
    eq = [pt("A", 0.0, 0.0), pt("B", 2.0, 0.0), pt("C", 5.0, 0.0), pt("D", 1.0, S3), pt("E", 3.5, 1.5 * S3)]
    out.append(problem(
        "desk-equilateral-rotation",
        "ABD and BCE are equilateral triangles on the same side of line AC. Compare AE and DC.",
        form(eq, [poly("A", "B", "D"), poly("B", "C", "E"), line("A", "C"), line("D", "C")],
             [rel("equal_length", "A", "B", "B", "D"), rel("equal_length", "A", "B", "A", "D"),
              rel("equal_length", "B", "C", "B", "E"), rel("equal_length", "B", "C", "C", "E"),
              rel("point_on_line", "B", "A", "C")],
             "segments A E D C"),
        "descriptor", "equal", [
            step("Rotate triangle DBC by 60 degrees about B; D lands on A and C on E.",
                 {"op": "rotate", "object": "triangle_BCD", "center": "B", "degrees": 60}),
            step("The rotated copy is congruent to DBC, so AE = DC.", answer("descriptor", "equal"))],
        aliases=["congruent", "equal length"]))

    # Kite ABCD.
    kite = [pt("A", 0.0, 3.0), pt("B", -2.0, 0.0), pt("C", 0.0, -4.0), pt("D", 2.0, 0.0)]
    out.append(problem(
        "desk-kite-angles",
        "In quadrilateral ABCD, AB = AD and CB = CD. Compare angles ADC and ABC.",
        form(kite, [poly("A", "B", "C", "D")],
             [rel("equal_length", "A", "B", "A", "D"), rel("equal_length", "C", "B", "C", "D")],
             "angles A D C A B C"),
        "descriptor", "equal", [
            step("Draw the diagonal AC.", {"op": "draw_line", "from": "A", "to": "C"}),
            step("Triangles ABC and ADC are congruent (SSS).", answer("descriptor", "equal"))]))

    # Parallel lines cut by a transversal.
    par = [pt("A", 0.0, 0.0), pt("B", 4.0, 0.0), pt("C", -2.0, 2.0), pt("D", 2.0, 2.0)]
    out.append(problem(
        "desk-alternate-angles",
        "AB is parallel to CD and angle BAD = 45 degrees. Find angle ADC.",
        form(par, [line("A", "B"), line("C", "D")],
             [rel("parallel", "A", "B", "C", "D"), rel("fixed_angle", "B", "A", "D", value=45.0)],
             "angle A D C"),
        "numerical", 45, [
            step("Draw the transversal AD.", {"op": "draw_line", "from": "A", "to": "D"}),
            step("Alternate angles are equal, so angle ADC = angle BAD.", answer("numerical", 45, "degree"))],
        unit="degree"))

    # Parallelogram with diagonals meeting at M.
    pg = [pt("A", 0.0, 0.0), pt("B", 5.0, 0.0), pt("C", 7.0, 3.0), pt("D", 2.0, 3.0), pt("M", 3.5, 1.5)]
    out.append(problem(
        "desk-parallelogram-side",
        "The diagonals AC and BD of ABCD bisect each other at M and AB = 5. Find CD.",
        form(pg, [line("A", "C"), line("B", "D"), line("A", "B")],
             [rel("midpoint", "M", "A", "C"), rel("midpoint", "M", "B", "D"), rel("fixed_length", "A", "B", value=5.0)],
             "length C D"),
        "numerical", 5, [
            step("Turn triangle ABM half a turn about M; A goes to C and B to D.",
                 {"op": "rotate", "object": "triangle_ABM", "center": "M", "degrees": 180}),
            step("The half turn preserves lengths, so CD = AB = 5.", answer("numerical", 5))]))

    # Kite with the lower half undrawn.
    rk = [pt("A", 0.0, 0.0), pt("B", 1.0, S3), pt("C", 4.0, 0.0), pt("D", 1.0, -S3)]
    out.append(problem(
        "desk-kite-reflection",
        "In kite ABCD, AB = AD, CB = CD and angle ABC = 90 degrees. Find angle ADC.",
        form(rk, [poly("A", "B", "C")],
             [rel("equal_length", "A", "B", "A", "D"), rel("equal_length", "C", "B", "C", "D"),
              rel("fixed_angle", "A", "B", "C", value=90.0)],
             "angle A D C"),
        "numerical", 90, [
            step("Reflect triangle ABC in AC; B lands on D.",
                 {"op": "reflect", "object": "triangle_ABC", "axis": ["A", "C"]}),
            step("Reflection preserves angles, so angle ADC = angle ABC.", answer("numerical", 90, "degree"))],
        unit="degree"))

    # Two squares sharing vertex A.
    sq = [pt("A", 0.0, 0.0), pt("B", 2.0, 0.0), pt("C", 2.0, 2.0), pt("D", 0.0, 2.0),
          pt("E", 3.0, 1.0), pt("F", 2.0, 4.0), pt("G", -1.0, 3.0)]
    out.append(problem(
        "desk-two-squares",
        "ABCD and AEFG are squares sharing the vertex A. Compare BE and DG.",
        form(sq, [poly("A", "B", "C", "D"), poly("A", "E", "F", "G"), line("B", "E"), line("D", "G")],
             [rel("equal_length", "A", "B", "A", "D"), rel("perpendicular", "A", "B", "A", "D"),
              rel("equal_length", "A", "E", "A", "G"), rel("perpendicular", "A", "E", "A", "G")],
             "segments B E D G"),
        "descriptor", "equal", [
            step("Rotate triangle ABE a quarter turn about A; B lands on D and E on G.",
                 {"op": "rotate", "object": "triangle_ABE", "center": "A", "degrees": 90}),
            step("So triangle ADG is congruent to ABE and BE = DG.", answer("descriptor", "equal"))]))
    return out


def extras():
    out = []
    seg = [pt("A", 0.0, 0.0), pt("B", 6.0, 0.0)]
    out.append(problem(
        "midpoint-ratio",
        "M is the midpoint of segment AB. Find AM : AB.",
        form(seg, [line("A", "B")], [rel("fixed_length", "A", "B", value=6.0)]),
        "ratio", "1:2", [
            step("Label the midpoint M of AB.", {"op": "label_point", "name": "M", "coordinates": [3, 0]}),
            step("AM is half of AB.", answer("ratio", "1/2"))]))

    tri = [pt("A", 0.0, 0.0), pt("B", 3.0, 0.0), pt("C", 3.0, 2.0)]
    out.append(problem(
        "quarter-turn",
        "Rotate triangle ABC by 90 degrees about B to get A'BC'. What kind of triangle is ABA'?",
        form(tri, [poly("A", "B", "C")], [rel("perpendicular", "A", "B", "B", "C")]),
        "descriptor", "isosceles right triangle", [
            step("Rotate triangle ABC a quarter turn about B.",
                 {"op": "rotate", "object": "triangle_ABC", "center": "B", "degrees": 90}),
            step("Draw AA' to see the triangle.", {"op": "draw_line", "from": "A", "to": "A'"}),
            step("BA = BA' and angle ABA' = 90 degrees.", answer("descriptor", "Isosceles  Right Triangle"))]))
    return out


def composition():
    rows = []
    counts = [("numerical", 201), ("ratio", 108), ("descriptor", 81)]
    i = 0
    for kind, n in counts:
        for _ in range(n):
            i += 1
            gold = {"numerical": 30, "ratio": "2:1", "descriptor": "isosceles"}[kind]
            rows.append({"id": "c%03d" % i, "text": "placeholder", "form": form([pt("A", 0.0, 0.0)], [], []),
                         "answer_type": kind, "answer": gold})
    # Interleave deterministically so the types are not in blocks.
    rows.sort(key=lambda r: (int(r["id"][1:]) * 7919) % 1009)
    return rows


def write_jsonl(name, rows):
    with open(HERE / name, "w") as f:
        for r in rows:
            f.write(json.dumps(r, sort_keys=True) + "\n")


if __name__ == "__main__":
    d = desk()
    write_jsonl("desk.jsonl", d)
    write_jsonl("gold.jsonl", d + extras())
    write_jsonl("composition.jsonl", composition())
