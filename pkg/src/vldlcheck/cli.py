"""Command line front end.

Subcommands: `sat` decides satisfiability of a formula file, `mc` checks a
system file against a formula file, `encode` renders the stack tree of a
word spec, and `oracle cross-check` runs the seeded three-way comparison.

Exit codes: 0 for Satisfiable/Holds and clean encode or oracle runs, 1 for
Unsatisfiable/Violated or cross-check disagreements, 2 for input errors,
3 when a stage cap is exceeded. The cap default can also be set through
the VLDLCHECK_STAGE_CAP environment variable.
"""

import argparse
import json
import os
import re
import sys

from .aja import delta_to_text
from .alphabet import (LassoWord, default_alphabet, matching_return,
                       parse_alphabet, parse_word_spec)
from .corpus import cross_check_corpus
from .errors import InputError, ResourceError
from .formula import TvpaLibrary, formula_to_str, parse_formula
from .oracle import cross_check
from .pipeline import model_check, satisfiable
from .stacktree import cardinal_addresses
from .treeauto import BuchiTreeAutomaton, automaton_to_dot
from .trees import FiniteTree, tree_to_dot
from .vps import Tvpa, parse_system

_AUTOMATON_RE = re.compile(r"automaton\s+([A-Za-z_][\w']*)\s*\{(.*?)\}",
                           re.S)


def _read_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from None


def _load_alphabet(path):
    if path is None:
        return default_alphabet()
    return parse_alphabet(_read_file(path))


def _parse_document(text, alphabet):
    """Collect `automaton Name { ... }` blocks into a library and return
    (library, remaining text). Blocks may reference earlier blocks."""
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    lib = TvpaLibrary(alphabet)

    def grab(match):
        name, body = match.group(1), match.group(2)
        system = parse_system(body, alphabet, library=lib)
        if not isinstance(system, Tvpa):
            system = Tvpa(system.states, alphabet, system.stack_symbols,
                          system.calls, system.returns, system.locals,
                          system.initial, (), name=name)
        if system.name is None:
            system.name = name
        lib.add(name, system)
        return ""

    rest = _AUTOMATON_RE.sub(grab, text)
    return lib, rest


def _load_formula(path, alphabet):
    lib, rest = _parse_document(_read_file(path), alphabet)
    match = re.search(r"formula\s*:\s*(.+)", rest, re.S)
    if not match:
        raise InputError("no `formula:` line in %s" % path)
    return parse_formula(match.group(1).strip(), lib)


def _load_system(path, alphabet):
    lib, rest = _parse_document(_read_file(path), alphabet)
    return parse_system(rest, alphabet, library=lib)


def _dump_artifacts(directory, artifacts):
    os.makedirs(directory, exist_ok=True)
    for name in sorted(artifacts):
        obj = artifacts[name]
        if isinstance(obj, BuchiTreeAutomaton):
            out = os.path.join(directory, name + ".dot")
            payload = automaton_to_dot(obj)
        else:
            out = os.path.join(directory, name + ".txt")
            payload = delta_to_text(obj)
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)


def _emit(args, report):
    print(json.dumps(report, sort_keys=True, indent=2))


def _cmd_sat(args):
    alphabet = _load_alphabet(args.alphabet)
    phi = _load_formula(args.formula, alphabet)
    artifacts = {} if args.dot else None
    verdict = satisfiable(phi, alphabet, cap=args.cap, artifacts=artifacts)
    if args.dot:
        _dump_artifacts(args.dot, artifacts)
    model = None if verdict.witness is None else str(verdict.witness)
    if args.json:
        _emit(args, {"command": "sat", "formula": formula_to_str(phi),
                     "verdict": verdict.answer, "witness": model,
                     "statistics": verdict.statistics})
    else:
        print(verdict.answer)
        if args.witness and model is not None:
            print("witness: %s" % model)
    return 0 if verdict.answer == "Satisfiable" else 1


def _cmd_mc(args):
    alphabet = _load_alphabet(args.alphabet)
    system = _load_system(args.system, alphabet)
    phi = _load_formula(args.formula, alphabet)
    artifacts = {} if args.dot else None
    verdict = model_check(system, phi, cap=args.cap, artifacts=artifacts)
    if args.dot:
        _dump_artifacts(args.dot, artifacts)
    cex = None if verdict.witness is None else str(verdict.witness)
    if args.json:
        _emit(args, {"command": "mc", "formula": formula_to_str(phi),
                     "verdict": verdict.answer, "counterexample": cex,
                     "statistics": verdict.statistics})
    else:
        print(verdict.answer)
        if args.cex and cex is not None:
            print("counterexample: %s" % cex)
    return 0 if verdict.answer == "Holds" else 1


def _annotated_nodes(alphabet, spec, depth):
    """Tree addresses to (label, word position), down to the given depth."""
    nodes = {}
    if isinstance(spec, LassoWord):
        def label_at(k):
            return spec[k]

        def in_range(k, hi):
            return hi is None or k < hi

        def match(k, hi):
            return matching_return(spec, k)
    else:
        word = tuple(spec)

        def label_at(k):
            return word[k]

        def in_range(k, hi):
            return k < (len(word) if hi is None else hi)

        def match(k, hi):
            end = len(word) if hi is None else hi
            height = 1
            for j in range(k + 1, end):
                kind = alphabet.kind(word[j])
                if alphabet.is_call(word[j]):
                    height += 1
                elif alphabet.is_return(word[j]):
                    height -= 1
                    if height == 0:
                        return j
            return None

    stack = [(0, None, "")]
    while stack:
        k, hi, addr = stack.pop()
        if len(addr) > depth or not in_range(k, hi):
            continue
        sym = label_at(k)
        nodes[addr] = (sym, k)
        if alphabet.is_call(sym):
            j = match(k, hi)
            if j is None:
                stack.append((k + 1, hi, addr + "1"))
            else:
                stack.append((j, hi, addr + "0"))
                stack.append((k + 1, j, addr + "1"))
        else:
            stack.append((k + 1, hi, addr + "0"))
    return nodes


def _render_tree_text(nodes, depth, cardinal):
    lines = []

    def walk(addr, prefix):
        head = prefix if addr == "" else "%s%s: " % (prefix, addr[-1])
        entry = nodes.get(addr)
        if entry is None:
            lines.append(head + "bot")
            return
        sym, pos = entry
        mark = " *" if addr in cardinal else ""
        lines.append("%s%s @%d%s" % (head, sym, pos, mark))
        if len(addr) < depth:
            indent = " " * len(head.rstrip()) + "  " if addr == "" else prefix + "  "
            walk(addr + "0", indent)
            walk(addr + "1", indent)

    walk("", "")
    return "\n".join(lines)


def _cmd_encode(args):
    alphabet = _load_alphabet(args.alphabet)
    spec = parse_word_spec(args.word, alphabet)
    nodes = _annotated_nodes(alphabet, spec, args.depth)
    shape = FiniteTree({a: lab for a, (lab, _pos) in nodes.items()})
    cardinal = set(cardinal_addresses(alphabet, shape, args.depth))
    if args.json:
        listed = [{"addr": a, "label": nodes[a][0], "position": nodes[a][1],
                   "cardinal": a in cardinal}
                  for a in sorted(nodes, key=lambda a: (len(a), a))]
        _emit(args, {"command": "encode", "word": args.word,
                     "depth": args.depth, "nodes": listed})
    elif args.dot:
        print(tree_to_dot(shape, depth=args.depth, marked=cardinal))
    else:
        print(_render_tree_text(nodes, args.depth, cardinal))
    return 0


def _cmd_oracle(args):
    formulas, lassos, alphabet = cross_check_corpus(
        args.seed, formula_count=args.count, lasso_count=args.lassos)
    report = cross_check(formulas, lassos, alphabet, cap=args.cap)
    if args.json:
        _emit(args, {"command": "oracle", "seed": args.seed,
                     "cases": report.cases,
                     "disagreements": report.disagreements,
                     "seconds": report.elapsed})
    else:
        print("cross-check: %d cases, %d disagreements (%.1fs)"
              % (report.cases, len(report.disagreements), report.elapsed))
        for item in report.disagreements:
            print("  %(formula)s on %(lasso)s: oracle=%(oracle)s "
                  "word=%(word)s tree=%(tree)s" % item)
            print("    shrunk: %(shrunk_formula)s on %(shrunk_lasso)s" % item)
    return 0 if not report.disagreements else 1


def _add_common(parser):
    parser.add_argument("--json", action="store_true",
                        help="emit a machine-readable report")
    parser.add_argument("--cap", type=int, default=None,
                        help="per-stage size cap (default 10^6)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="vldlcheck",
        description="Satisfiability and model checking for visibly linear"
                    " dynamic logic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sat", help="decide satisfiability of a formula file")
    p.add_argument("formula", help="formula file")
    p.add_argument("-a", "--alphabet", help="alphabet file (default c/r/l)")
    p.add_argument("--witness", action="store_true",
                   help="print a model when satisfiable")
    p.add_argument("--dot", metavar="DIR",
                   help="dump intermediate automata into DIR")
    _add_common(p)
    p.set_defaults(func=_cmd_sat)

    p = sub.add_parser("mc", help="model-check a system against a formula")
    p.add_argument("system", help="system file")
    p.add_argument("formula", help="formula file")
    p.add_argument("-a", "--alphabet", help="alphabet file (default c/r/l)")
    p.add_argument("--cex", action="store_true",
                   help="print a counterexample when violated")
    p.add_argument("--dot", metavar="DIR",
                   help="dump intermediate automata into DIR")
    _add_common(p)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("encode", help="render the stack tree of a word")
    p.add_argument("word", help="word spec, e.g. \"l c l r c l (l)^w\"")
    p.add_argument("-a", "--alphabet", help="alphabet file (default c/r/l)")
    p.add_argument("--depth", type=int, default=5,
                   help="tree depth to render (default 5)")
    p.add_argument("--dot", action="store_true",
                   help="emit DOT instead of text")
    _add_common(p)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("oracle", help="consistency checks between engines")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    q = osub.add_parser("cross-check",
                        help="compare oracle, game, and tree verdicts on a"
                             " seeded corpus")
    q.add_argument("--seed", type=int, default=20240817)
    q.add_argument("--count", type=int, default=100,
                   help="number of formulas (default 100)")
    q.add_argument("--lassos", type=int, default=20,
                   help="number of lassos (default 20)")
    _add_common(q)
    q.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print("resource limit: %s" % exc, file=sys.stderr)
        return 3
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
