"""Command-line frontend.

Exit codes: 0 success, 1 a distinguishing witness was found (the inputs
differ), 2 usage or parse error, 3 a size/enumeration cap was exceeded.
Output on stdout is deterministic TSV or structure blocks; diagnostics go to
stderr.  The environment variable HOMCOUNT_CAP overrides the global
structure-count cap.
"""

from __future__ import annotations

import argparse
import sys

from .cklogic import ck_equivalent_wl, ck_profile_equal, treewidth
from .errors import CapExceededError, HomcountError, ParseError
from .formats import (
    parse_groups_and_towers,
    parse_structures,
    parse_tree_specs,
    parse_trees,
    write_structure,
    write_tree,
)
from .homsearch import count_morphisms
from .lovasz import LEFT, RIGHT, distinguish, enumerate_structures, hom_profile
from .profinite import continuous_hom_count, distinguish_towers, surjection_profile
from .quotposet import quotient_poset
from .sigstruct import (
    E_SM,
    SE_M,
    FactorisationSystem,
    MorphismClass,
    are_isomorphic,
    canonical_form,
)
from .stirling import kernel_decomposition, stirling_number
from .trees import count_tree_morphisms, distinguish_trees, truncate

EXIT_OK = 0
EXIT_DISTINGUISHED = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _first_structure(path: str):
    blocks = parse_structures(_read(path))
    if not blocks:
        raise ParseError(f"{path} contains no structure block")
    return blocks[0]


def _first_tree(path: str):
    blocks = parse_trees(_read(path))
    if not blocks:
        raise ParseError(f"{path} contains no tree block")
    return blocks[0]


def _system(text: str) -> FactorisationSystem:
    return SE_M if text == "se-m" else E_SM


def _class(text: str) -> MorphismClass:
    return MorphismClass(text)


def _partition_text(partition) -> str:
    return "|".join(".".join(str(x) for x in block) for block in partition)


def _add_system(p):
    p.add_argument("--system", choices=["se-m", "e-sm"], default="se-m",
                   help="factorisation system: quotients reflect relations "
                        "(se-m) or embeddings do (e-sm)")


def _add_side(p):
    p.add_argument("--side", choices=[RIGHT, LEFT], default=RIGHT,
                   help="count maps into the subject (right) or out of it (left)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homcount",
        description="Homomorphism-counting laboratory for finite relational "
                    "structures, rooted trees and group towers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "count",
        help="count morphisms of a class from one structure into another",
        description="Exact number of maps of the chosen class c -> a; the "
                    "cardinalities that drive isomorphism-by-counting.",
    )
    p.add_argument("--class", dest="cls",
                   choices=[c.value for c in MorphismClass], default="hom")
    _add_system(p)
    p.add_argument("--limit", type=int,
                   help="also list up to LIMIT witness maps")
    p.add_argument("source")
    p.add_argument("target")

    p = sub.add_parser(
        "profile",
        help="morphism-count profile against all tests up to a size budget",
        description="The hom-count vector that determines a finite structure "
                    "up to isomorphism (Lovasz-style counting); TSV of "
                    "canonical code and count.",
    )
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--class", dest="cls",
                   choices=[c.value for c in MorphismClass], default="hom")
    _add_side(p)
    _add_system(p)
    p.add_argument("subject")

    p = sub.add_parser(
        "distinguish",
        help="search for a test structure separating two structures",
        description="Lovasz-style homomorphism counting: enumerate canonical "
                    "tests by size and report the first one whose counts "
                    "differ; exit 1 when a witness exists.",
    )
    p.add_argument("--budget", type=int, required=True)
    _add_side(p)
    _add_system(p)
    p.add_argument("left_subject")
    p.add_argument("right_subject")

    p = sub.add_parser(
        "iso",
        help="canonical-form isomorphism test",
        description="Decides isomorphism by canonical code equality.",
    )
    p.add_argument("left_subject")
    p.add_argument("right_subject")

    p = sub.add_parser(
        "mobius",
        help="quotient poset with its Moebius function",
        description="The poset of quotient classes with its Hasse diagram "
                    "and Moebius table (Moebius inversion in the incidence "
                    "algebra recovers embedding from hom counts).",
    )
    _add_system(p)
    p.add_argument("source")

    p = sub.add_parser(
        "kernel",
        help="decompose a hom-set over quotient classes",
        description="Stirling-kernel decomposition: hom(c, a) splits into "
                    "generic elements over the quotient classes of c; TSV of "
                    "partition, block count and generic count.",
    )
    _add_system(p)
    p.add_argument("source")
    p.add_argument("target")

    p = sub.add_parser(
        "stirling",
        help="Stirling number of the second kind",
        description="Partitions of an n-set into m non-empty blocks; the "
                    "multiplicities in the hom-set decomposition over finite "
                    "sets.",
    )
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)

    p = sub.add_parser(
        "treewidth",
        help="exact tree-width of the Gaifman graph",
        description="Exact tree-width via dynamic programming over "
                    "elimination orderings; tree-width < k characterises the "
                    "test structures of k-variable counting logic.",
    )
    p.add_argument("subject")

    p = sub.add_parser(
        "ck",
        help="counting-logic equivalence via bounded-tree-width hom counts",
        description="k-variable counting logic equivalence: compare hom "
                    "counts from all connected structures of tree-width < k "
                    "(hom-profile method) or run the Weisfeiler-Leman "
                    "refinement oracle; exit 1 when the subjects differ.",
    )
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--method", choices=["hom-profile", "wl"],
                   default="hom-profile")
    p.add_argument("--undirected", action="store_true",
                   help="restrict tests to symmetric loopless relations")
    p.add_argument("left_subject")
    p.add_argument("right_subject")

    trees = sub.add_parser(
        "trees",
        help="rooted-tree morphism counting and distinguishing",
        description="Tree morphisms preserve the root and the covering "
                    "relation; counting them determines finitely branching "
                    "trees, exercised here on finite trees and truncations.",
    )
    tsub = trees.add_subparsers(dest="tree_command", required=True)
    p = tsub.add_parser("count", help="count tree morphisms r -> p")
    p.add_argument("source")
    p.add_argument("target")
    p = tsub.add_parser("distinguish",
                        help="first test tree with differing counts; exit 1 "
                             "when found")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("left_subject")
    p.add_argument("right_subject")
    p = tsub.add_parser("truncate",
                        help="unfold a finitely branching tree spec to a depth")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("spec")

    tower = sub.add_parser(
        "tower",
        help="group towers: continuous-hom counts and distinguishing",
        description="A tower of finite groups with surjective connecting "
                    "maps is a truncated inverse limit; level hom counts are "
                    "non-decreasing and their stabilized values drive "
                    "isomorphism-by-counting for profinite groups.",
    )
    wsub = tower.add_subparsers(dest="tower_command", required=True)
    p = wsub.add_parser("count",
                        help="stabilized hom count from a tower into a group")
    p.add_argument("tower_file")
    p.add_argument("group_file")
    p = wsub.add_parser("distinguish",
                        help="first family group with differing stabilized "
                             "counts; exit 1 when found")
    p.add_argument("--family", required=True,
                   help="file with the test groups, in order")
    p.add_argument("left_tower")
    p.add_argument("right_tower")
    p = wsub.add_parser("surjections",
                        help="which family groups some tower level surjects onto")
    p.add_argument("--family", required=True)
    p.add_argument("tower_file")

    p = sub.add_parser(
        "selftest",
        help="run the acceptance suite",
        description="Runs every acceptance criterion at the chosen level and "
                    "prints one PASS/FAIL line per criterion.",
    )
    p.add_argument("--level", choices=["quick", "desk"], default="desk")

    return parser


def _cmd_count(args) -> int:
    _, c = _first_structure(args.source)
    _, a = _first_structure(args.target)
    res = count_morphisms(c, a, _class(args.cls), _system(args.system),
                          enumerate_witnesses=args.limit is not None,
                          limit=args.limit)
    print(res.count)
    if res.witnesses is not None:
        for m in res.witnesses:
            print("map\t" + " ".join(str(y) for y in m.map))
        if res.truncated:
            print("truncated")
    return EXIT_OK


def _cmd_profile(args) -> int:
    _, a = _first_structure(args.subject)
    family = enumerate_structures(a.signature, args.budget)
    prof = hom_profile(a, family, args.side, _class(args.cls),
                       _system(args.system))
    for test, count in zip(prof.family, prof.counts):
        print(f"{canonical_form(test).decode('ascii')}\t{count}")
    return EXIT_OK


def _cmd_distinguish(args) -> int:
    name_a, a = _first_structure(args.left_subject)
    name_b, b = _first_structure(args.right_subject)
    res = distinguish(a, b, args.budget, args.side, _system(args.system))
    if res.distinguished:
        sys.stdout.write(write_structure("witness", res.witness))
        print(f"count\t{name_a}\t{res.counts[0]}")
        print(f"count\t{name_b}\t{res.counts[1]}")
        return EXIT_DISTINGUISHED
    print(res.verdict)
    return EXIT_OK


def _cmd_iso(args) -> int:
    _, a = _first_structure(args.left_subject)
    _, b = _first_structure(args.right_subject)
    print("true" if are_isomorphic(a, b) else "false")
    return EXIT_OK


def _cmd_mobius(args) -> int:
    _, c = _first_structure(args.source)
    q = quotient_poset(c, _system(args.system))
    for i, e in enumerate(q.elements):
        print(f"element\t{i}\t{_partition_text(e.partition)}")
    for i in range(len(q)):
        for j in q.poset.up_set(i):
            # cover: the interval [i, j] holds nothing but its endpoints
            if i != j and len(set(q.poset.up_set(i)) & set(q.poset.down_set(j))) == 2:
                print(f"hasse\t{i}\t{j}")
    for i in range(len(q)):
        for j in range(len(q)):
            if q.poset.leq(i, j):
                print(f"mobius\t{i}\t{j}\t{q.poset.mobius(i, j)}")
    return EXIT_OK


def _cmd_kernel(args) -> int:
    _, c = _first_structure(args.source)
    _, a = _first_structure(args.target)
    dec = kernel_decomposition(c, a, _system(args.system))
    print("partition\tblocks\tgeneric")
    for row in dec.rows:
        print(f"{_partition_text(row.partition)}\t{len(row.partition)}"
              f"\t{row.generic}")
    print(f"total\t\t{dec.total}")
    return EXIT_OK


def _cmd_stirling(args) -> int:
    print(stirling_number(args.n, args.m))
    return EXIT_OK


def _cmd_treewidth(args) -> int:
    _, a = _first_structure(args.subject)
    print(treewidth(a))
    return EXIT_OK


def _cmd_ck(args) -> int:
    name_a, a = _first_structure(args.left_subject)
    name_b, b = _first_structure(args.right_subject)
    if args.method == "wl":
        verdict = ck_equivalent_wl(a, b, args.k)
        print(f"{verdict.method}\t"
              f"{'equivalent' if verdict.equivalent else 'inequivalent'}")
        return EXIT_OK if verdict.equivalent else EXIT_DISTINGUISHED
    if args.budget is None:
        raise ParseError("--budget is required for the hom-profile method")
    verdict = ck_profile_equal(a, b, args.k, args.budget, args.undirected)
    if verdict.equivalent:
        print("hom-profile\tequivalent-within-budget")
        return EXIT_OK
    sys.stdout.write(write_structure("witness", verdict.witness))
    print(f"count\t{name_a}\t{verdict.counts[0]}")
    print(f"count\t{name_b}\t{verdict.counts[1]}")
    return EXIT_DISTINGUISHED


def _cmd_trees(args) -> int:
    if args.tree_command == "count":
        _, r = _first_tree(args.source)
        _, p = _first_tree(args.target)
        print(count_tree_morphisms(r, p))
        return EXIT_OK
    if args.tree_command == "distinguish":
        name_p, p = _first_tree(args.left_subject)
        name_q, q = _first_tree(args.right_subject)
        res = distinguish_trees(p, q, args.budget)
        if res.distinguished:
            sys.stdout.write(write_tree("witness", res.witness))
            print(f"count\t{name_p}\t{res.counts[0]}")
            print(f"count\t{name_q}\t{res.counts[1]}")
            return EXIT_DISTINGUISHED
        print(res.verdict)
        return EXIT_OK
    specs = parse_tree_specs(_read(args.spec))
    if not specs:
        raise ParseError(f"{args.spec} contains no treespec block")
    name, spec = specs[0]
    sys.stdout.write(write_tree(name, truncate(spec, args.depth)))
    return EXIT_OK


def _tower_from(path: str):
    groups, towers = parse_groups_and_towers(_read(path))
    if not towers:
        raise ParseError(f"{path} contains no tower block")
    name = next(iter(towers))
    return name, towers[name]


def _family_from(path: str):
    groups, _ = parse_groups_and_towers(_read(path))
    if not groups:
        raise ParseError(f"{path} contains no group block")
    return list(groups.items())


def _cmd_tower(args) -> int:
    if args.tower_command == "count":
        _, t = _tower_from(args.tower_file)
        fam = _family_from(args.group_file)
        _, c = fam[0]
        count, stabilized = continuous_hom_count(t, c)
        print(f"{count}\t{'stabilized' if stabilized else 'unstabilized'}")
        return EXIT_OK
    if args.tower_command == "distinguish":
        name1, t1 = _tower_from(args.left_tower)
        name2, t2 = _tower_from(args.right_tower)
        fam = _family_from(args.family)
        res = distinguish_towers(t1, t2, [g for _, g in fam])
        for w in res.warnings:
            wname = next(n for n, g in fam if g == w)
            print(f"warning: counts for {wname} not stabilized", file=sys.stderr)
        if res.distinguished:
            wname = next(n for n, g in fam if g == res.witness)
            print(f"witness\t{wname}")
            print(f"count\t{name1}\t{res.counts[0]}")
            print(f"count\t{name2}\t{res.counts[1]}")
            return EXIT_DISTINGUISHED
        print(res.verdict)
        return EXIT_OK
    _, t = _tower_from(args.tower_file)
    fam = _family_from(args.family)
    flags = surjection_profile(t, [g for _, g in fam])
    for (name, _), flag in zip(fam, flags):
        print(f"{name}\t{'true' if flag else 'false'}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all(args.level)
    return EXIT_OK if all(r.passed for r in results) else EXIT_DISTINGUISHED


_HANDLERS = {
    "count": _cmd_count,
    "profile": _cmd_profile,
    "distinguish": _cmd_distinguish,
    "iso": _cmd_iso,
    "mobius": _cmd_mobius,
    "kernel": _cmd_kernel,
    "stirling": _cmd_stirling,
    "treewidth": _cmd_treewidth,
    "ck": _cmd_ck,
    "trees": _cmd_trees,
    "tower": _cmd_tower,
    "selftest": _cmd_selftest,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _HANDLERS[args.command](args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except HomcountError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
