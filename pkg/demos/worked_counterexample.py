"""Why degree bounds alone cannot replace a group-count constraint.

Walkthrough on the classic six-element instance (values 1..6, manhattan
distance, three groups of two or three elements). A formulation that only
bounds each element's number of same-group partners admits a two-group
partition with a higher score; the full model's leader rows reject it.

Run:  python demos/worked_counterexample.py
"""

from mdgp import (
    Grouping,
    build_degree_only,
    build_unequal,
    check_assignment,
    build_report,
    decode_partition,
    encode_grouping,
    iter_set_partitions,
    objective_value,
    solve_bruteforce,
    validate_grouping,
    verify_group_count,
)
from mdgp.cli import worked_example_instance


def banner(text):
    print()
    print("=" * 64)
    print(text)
    print("=" * 64)


def show(grouping, inst, label):
    value = objective_value(grouping, inst.dist)
    report = validate_grouping(grouping, inst)
    pretty = " ".join("{" + ",".join(map(str, g)) + "}" for g in grouping.groups)
    verdict = "feasible" if report.feasible else "infeasible: " + "; ".join(report.violations)
    print(f"  {label}: {pretty}  value={value:g}  ({verdict})")


def main():
    inst = worked_example_instance()

    banner("The instance")
    print("Six elements with values 1..6; distance = |value_i - value_j|.")
    print(f"Exactly G={inst.G} groups, each of size {inst.a}..{inst.b}.")

    banner("Exact optimum with the group count enforced")
    exact = solve_bruteforce(inst)
    print(f"Enumerated {exact.nodes_explored} feasible partitions.")
    show(exact.grouping, inst, "oracle optimum")
    show(Grouping([(1, 5), (2, 4), (3, 6)]), inst, "another optimum")
    print("  Several partitions tie at 9; no feasible one does better.")

    banner("Drop the group count, keep only the degree bounds")
    print("Now any partition whose group sizes sit in [2, 3] qualifies,")
    print("no matter how many groups it has. The best such partition:")
    best = max(
        (
            g
            for g in iter_set_partitions(inst.n)
            if all(inst.a <= len(m) <= inst.b for m in g.groups)
        ),
        key=lambda g: objective_value(g, inst.dist),
    )
    show(best, inst, "relaxed optimum")
    witness = Grouping([(1, 3, 6), (2, 4, 5)])
    show(witness, inst, "witness")
    print("  16 > 9, but only because the partition uses 2 groups, not 3.")

    banner("The defective model accepts it; the full model pins it down")
    deg = check_assignment(build_degree_only(inst), encode_grouping(witness, "degree_only"))
    print(f"  degree-only model: objective {deg.objective:g}, violations: {list(deg.violations) or 'none'}")
    full = check_assignment(build_unequal(inst), encode_grouping(witness, "unequal"))
    print(f"  full model:        objective {full.objective:g}, violations: {list(full.violations)}")
    print("  The leader-count row demands G-1 = 2 leaders besides element 1;")
    print("  a two-group partition can only supply one.")

    banner("Decoding and auditing the correct optimum")
    asg = encode_grouping(Grouping([(1, 5), (2, 4), (3, 6)]), "unequal")
    decoded = decode_partition(asg.x, inst.n)
    report = build_report(decoded, asg.y)
    audit = verify_group_count(report, asg.y, inst.G)
    print(f"  decoded groups: {decoded.groups}")
    print(f"  leaders (incl. implicit element 1): {sorted(report.leader_set)}")
    print(
        "  audit: one leader per group =", audit.one_leader_per_group,
        "| minima are leaders =", audit.minima_are_leaders,
        "| group count matches =", audit.group_count_matches,
    )


if __name__ == "__main__":
    main()
