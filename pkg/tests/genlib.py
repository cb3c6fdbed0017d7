"""Seeded random generators and the derivation mutator shared across tests."""

from __future__ import annotations

import random
from dataclasses import replace

from g4c.kleene import CompanyProfile
from g4c.model import (
    And,
    Atom,
    Bottom,
    Impl,
    Not,
    OpaqueAtom,
    Or,
    PredicateKind,
    QualifiedName,
    Top,
)
from g4c.prover import AXIOM_NAMES, Derivation, RULE_NAMES, Sequent

ATOM_POOL = tuple(OpaqueAtom(QualifiedName.parse(n)) for n in "ABCDE")


def random_formula(rng: random.Random, depth: int, atoms=ATOM_POOL):
    """Random pure-propositional formula with connective depth <= depth."""
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.85:
            return rng.choice(atoms)
        return Top() if roll < 0.925 else Bottom()
    kind = rng.choice(("not", "and", "or", "impl"))
    if kind == "not":
        return Not(random_formula(rng, depth - 1, atoms))
    if kind == "impl":
        return Impl(
            random_formula(rng, depth - 1, atoms),
            random_formula(rng, depth - 1, atoms),
        )
    arity = rng.choice((2, 2, 3))
    children = tuple(random_formula(rng, depth - 1, atoms) for _ in range(arity))
    return And(children) if kind == "and" else Or(children)


def random_sequent(rng: random.Random, depth: int = 5, max_side: int = 2) -> Sequent:
    left = tuple(
        random_formula(rng, rng.randint(0, depth)) for _ in range(rng.randint(0, max_side))
    )
    right = tuple(
        random_formula(rng, rng.randint(0, depth)) for _ in range(rng.randint(0, max_side))
    )
    return Sequent(left, right)


def random_code(rng: random.Random, max_len: int = 6) -> str:
    return "".join(rng.choice("0123456789") for _ in range(rng.randint(1, max_len)))


def random_code_list(rng: random.Random, max_items: int = 4) -> tuple[str, ...]:
    return tuple(random_code(rng) for _ in range(rng.randint(0, max_items)))


def random_ground_pair(rng: random.Random, kind: PredicateKind) -> tuple[Atom, Atom]:
    if rng.random() < 0.5:
        # bias towards related lists so the side condition holds reasonably often
        base = random_code_list(rng, 3)
        extended = tuple(code + random_code(rng, 3) for code in base) or base
        return Atom(kind, extended), Atom(kind, base + random_code_list(rng, 2))
    return Atom(kind, random_code_list(rng)), Atom(kind, random_code_list(rng))


def random_complete_profile(rng: random.Random) -> CompanyProfile:
    return CompanyProfile(
        seat=random_code(rng),
        sites=frozenset(random_code(rng) for _ in range(rng.randint(0, 3))),
        legal_form=random_code(rng),
        oenace=frozenset(random_code(rng) for _ in range(rng.randint(0, 3))),
    )


def random_profile(rng: random.Random) -> CompanyProfile:
    full = random_complete_profile(rng)
    return CompanyProfile(
        seat=full.seat if rng.random() < 0.7 else None,
        sites=full.sites if rng.random() < 0.7 else None,
        legal_form=full.legal_form if rng.random() < 0.7 else None,
        oenace=full.oenace if rng.random() < 0.7 else None,
    )


def refine_profile(p: CompanyProfile, rng: random.Random) -> CompanyProfile:
    """Fill some Unknown fields with fresh Known values; Known fields keep."""
    fresh = random_complete_profile(rng)
    return CompanyProfile(
        seat=p.seat if p.seat is not None else (fresh.seat if rng.random() < 0.7 else None),
        sites=p.sites if p.sites is not None else (fresh.sites if rng.random() < 0.7 else None),
        legal_form=p.legal_form
        if p.legal_form is not None
        else (fresh.legal_form if rng.random() < 0.7 else None),
        oenace=p.oenace
        if p.oenace is not None
        else (fresh.oenace if rng.random() < 0.7 else None),
    )


def random_condition_formula(rng: random.Random, depth: int):
    """Random formula over the built-in predicates, as grant conditions look."""
    if depth == 0 or rng.random() < 0.35:
        roll = rng.random()
        if roll < 0.9:
            kind = rng.choice(list(PredicateKind))
            return Atom(kind, tuple(random_code(rng, 3) for _ in range(rng.randint(1, 3))))
        return Top() if roll < 0.95 else Bottom()
    kind = rng.choice(("not", "and", "or", "impl"))
    if kind == "not":
        return Not(random_condition_formula(rng, depth - 1))
    if kind == "impl":
        return Impl(
            random_condition_formula(rng, depth - 1),
            random_condition_formula(rng, depth - 1),
        )
    children = tuple(
        random_condition_formula(rng, depth - 1) for _ in range(rng.choice((2, 2, 3)))
    )
    return And(children) if kind == "and" else Or(children)


# derivation mutations, each guaranteed to break validity

def _nodes(d: Derivation, path=()):
    yield path, d
    for i, p in enumerate(d.premises):
        yield from _nodes(p, path + (i,))


def _rebuild(d: Derivation, path: tuple, new_node: Derivation) -> Derivation:
    if not path:
        return new_node
    i = path[0]
    premises = list(d.premises)
    premises[i] = _rebuild(premises[i], path[1:], new_node)
    return replace(d, premises=tuple(premises))


_FRESH = OpaqueAtom(QualifiedName.parse("mutant-atom-xyzzy"))


def mutate_derivation(d: Derivation, rng: random.Random) -> Derivation:
    """One random single-node mutation: rule rename, principal swap, premise
    tamper, or premise swap. Every kind produces an invalid tree."""
    nodes = list(_nodes(d))
    for _ in range(200):
        path, node = rng.choice(nodes)
        kind = rng.choice(("rename", "principal", "tamper", "swap"))
        if kind == "rename":
            if node.principal is None:
                # axiom leaf: claim a logical rule instead (no premises -> invalid)
                new = replace(node, rule=rng.choice(RULE_NAMES))
            else:
                others = [n for n in RULE_NAMES if n != node.rule]
                new = replace(node, rule=rng.choice(others))
            return _rebuild(d, path, new)
        if kind == "principal" and node.principal is not None:
            side, principal = node.principal
            pool = node.conclusion.left if side == "left" else node.conclusion.right
            candidates = [f for f in pool if f != principal]
            if not candidates:
                continue
            new = replace(node, principal=(side, rng.choice(candidates)))
            return _rebuild(d, path, new)
        if kind == "tamper" and node.premises:
            i = rng.randrange(len(node.premises))
            sub = node.premises[i]
            tampered = replace(
                sub, conclusion=Sequent(sub.conclusion.left + (_FRESH,), sub.conclusion.right)
            )
            premises = list(node.premises)
            premises[i] = tampered
            return _rebuild(d, path, replace(node, premises=tuple(premises)))
        if kind == "swap" and len(node.premises) == 2:
            a, b = node.premises
            if a.conclusion == b.conclusion:
                continue
            return _rebuild(d, path, replace(node, premises=(b, a)))
    raise AssertionError("no applicable mutation found")
