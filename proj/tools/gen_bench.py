#!/usr/bin/env python3
"""Writes the desk-scale benchmark programs and suite manifest into bench/."""
import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "bench"


def chain(n):
    return [(j, j + 1) for j in range(n - 1)]


def cycle(n):
    return chain(n) + [(0, n - 1)]


def join(terms):
    return " + ".join(terms).replace("+ -", "- ")


def zz(edges, c=1):
    return [f"{c} * q[{a}].Z * q[{b}].Z" for a, b in edges]


def singles(n, op, c=1):
    return [f"{c} * q[{j}].{op}" for j in range(n)]


def program(name, n, evolves):
    lines = [f"system {name} {{", f"  sites q[{n}];"]
    for duration, steps, ham in evolves:
        clause = f" steps {steps}" if steps else ""
        lines.append(f"  evolve for {duration}{clause} under {ham};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def ising_chain(n):
    return program(f"ising_chain_{n}", n, [(1, None, join(zz(chain(n)) + singles(n, "X")))])


def ising_cycle(n):
    return program(f"ising_cycle_{n}", n, [(1, None, join(zz(cycle(n)) + singles(n, "X")))])


def heis_chain(n):
    terms = []
    for a, b in chain(n):
        terms += [f"q[{a}].{p} * q[{b}].{p}" for p in "XYZ"]
    return program(f"heis_chain_{n}", n, [(1, None, join(terms + singles(n, "X")))])


def qaoa_cycle(n, layers=2):
    h0 = join([f"q[{j}].X + q[{j}].Z" for j in range(n)])
    evolves = [(repr(math.pi / math.sqrt(8)), None, h0)]
    for _ in range(layers):
        evolves.append((0.25, None, join(zz(cycle(n)))))
        evolves.append((0.25, None, join(singles(n, "X"))))
    return program(f"qaoa_cycle_{n}", n, evolves)


def mis_chain(n, u=1, omega=2, alpha=4, steps=10):
    terms = [f"-(-1 + 2 * t) * {u} * n(q[{j}]) + {omega / 2} * q[{j}].X" for j in range(n)]
    terms += [f"{alpha} * n(q[{a}]) * n(q[{b}])" for a, b in chain(n)]
    return program(f"mis_chain_{n}", n, [(1, steps, join(terms))])


def kitaev(n, mu=2, hop=1, h=0.5):
    terms = zz(chain(n), mu / 2) + singles(n, "X", -hop) + singles(n, "Z", -h)
    return program(f"kitaev_{n}", n, [(1, None, join(terms))])


CASES = [
    ("ising_chain", 6, ising_chain),
    ("ising_chain", 12, ising_chain),
    ("ising_cycle", 6, ising_cycle),
    ("ising_cycle", 12, ising_cycle),
    ("heis_chain", 12, heis_chain),
    ("qaoa_cycle", 12, qaoa_cycle),
    ("mis_chain", 12, mis_chain),
    ("kitaev", 12, kitaev),
]

MACHINES = ["falcon27_heisenberg.json", "complete12_heisenberg.json"]


def main():
    OUT.mkdir(exist_ok=True)
    cases = []
    for family, n, make in CASES:
        path = f"{family}_{n}.hml"
        (OUT / path).write_text(make(n))
        for machine in MACHINES:
            cases.append({"name": f"{family}_{n}@{machine.split('_')[0]}", "program": path, "machine": machine})
    (OUT / "suite.json").write_text(json.dumps({"cases": cases}, indent=2) + "\n")


if __name__ == "__main__":
    main()
