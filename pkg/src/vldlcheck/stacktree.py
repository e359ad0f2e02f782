"""The word-to-tree correspondence for nested-structure words.

A word over a pushdown alphabet is folded into a binary tree: a matched
call stores its infix (the part strictly between the call and its matching
return) in the right subtree and continues at the matching return in the
left subtree; an unmatched call continues on the right with a bot left
child; locals and returns continue on the left with a bot right child.
Infinite words yield trees with exactly one infinite branch (the cardinal
branch), and the set of all such trees is recognized by a seven-state
Büchi tree automaton.
"""

from .alphabet import CALL, RETURN, LassoWord, matching_return
from .caps import stage_cap
from .errors import MalformedWitnessError, ResourceError
from .trees import BOT, FiniteTree, RegularTree
from .treeauto import BuchiTreeAutomaton

BOT_STATE = "bot"


def encode(alphabet, word):
    """Stack tree of a finite word, as a FiniteTree."""
    word = tuple(word)
    for sym in word:
        alphabet.kind(sym)
    nodes = {}
    _encode_range(alphabet, word, 0, len(word), "", nodes)
    return FiniteTree(nodes)


def _encode_range(alphabet, word, lo, hi, addr, nodes):
    if lo >= hi:
        return
    sym = word[lo]
    nodes[addr] = sym
    if alphabet.kind(sym) == CALL:
        j = _match_scan(alphabet, word.__getitem__, lo, hi)
        if j is None:
            _encode_range(alphabet, word, lo + 1, hi, addr + "1", nodes)
        else:
            _encode_range(alphabet, word, j, hi, addr + "0", nodes)
            _encode_range(alphabet, word, lo + 1, j, addr + "1", nodes)
    else:
        _encode_range(alphabet, word, lo + 1, hi, addr + "0", nodes)


def _match_scan(alphabet, at, lo, hi):
    """Matching-return index of the call at lo, scanning positions < hi."""
    height = 1
    for j in range(lo + 1, hi):
        kind = alphabet.kind(at(j))
        if kind == CALL:
            height += 1
        elif kind == RETURN:
            height -= 1
            if height == 0:
                return j
    return None


def encode_lasso(lasso, cap=None):
    """Stack tree of a lasso word, as a RegularTree.

    Generator states are scopes (k, e): the subtree encoding positions
    k..e-1, with e = None for the infinite suffix from k. Scopes are
    canonicalized by shifting whole periods off, which is sound because
    the suffix from k equals the suffix from k + |period| once k is past
    the prefix.
    """
    alphabet = lasso.alphabet
    limit = stage_cap(cap)
    base = len(lasso.prefix)
    per = len(lasso.period)

    def canon(k, e):
        while k >= base + per:
            k -= per
            if e is not None:
                e -= per
        return (k, e)

    def child(k, e):
        if e is not None and k >= e:
            return BOT_STATE
        return canon(k, e)

    labels = {BOT_STATE: BOT}
    left = {BOT_STATE: BOT_STATE}
    right = {BOT_STATE: BOT_STATE}
    root = canon(0, None)
    todo = [root]
    while todo:
        state = todo.pop()
        if state in labels:
            continue
        if len(labels) > limit:
            raise ResourceError("stack-tree generator exceeds the state cap",
                                stage="encode")
        k, e = state
        sym = lasso[k]
        labels[state] = sym
        if alphabet.kind(sym) == CALL:
            if e is None:
                j = matching_return(lasso, k)
            else:
                j = _match_scan(alphabet, lasso.__getitem__, k, e)
            if j is None:
                left[state] = BOT_STATE
                right[state] = child(k + 1, e)
            else:
                left[state] = child(j, e)
                right[state] = child(k + 1, j)
        else:
            left[state] = child(k + 1, e)
            right[state] = BOT_STATE
        for nxt in (left[state], right[state]):
            if nxt != BOT_STATE and nxt not in labels:
                todo.append(nxt)
    return RegularTree(root, labels, left, right)


def stack_tree_recognizer(alphabet):
    """Büchi tree automaton accepting exactly the stack trees of infinite
    words over the alphabet.

    Spine states track the infinite branch (flag 1 after an unmatched
    call, which rules out later unmatched returns); ret states force the
    left child of a matched call to carry its matching return; fin/finret
    recognize finite well-matched right subtrees and are non-accepting so
    that those subtrees cannot go on forever; bot checks bot-closure.
    """
    s0, s1, r0, r1, fin, finret, botq = (
        "spine0", "spine1", "ret0", "ret1", "fin", "finret", "bot")
    labels = set(alphabet.symbols) | {BOT}
    trs = set()
    trs.add((botq, BOT, botq, botq))
    trs.add((fin, BOT, botq, botq))
    for sym in alphabet.locals:
        trs.add((s0, sym, s0, botq))
        trs.add((s1, sym, s1, botq))
        trs.add((fin, sym, fin, botq))
    for sym in alphabet.returns:
        trs.add((s0, sym, s0, botq))
        trs.add((r0, sym, s0, botq))
        trs.add((r1, sym, s1, botq))
        trs.add((finret, sym, fin, botq))
    for sym in alphabet.calls:
        trs.add((s0, sym, r0, fin))
        trs.add((s1, sym, r1, fin))
        trs.add((s0, sym, botq, s1))
        trs.add((s1, sym, botq, s1))
        trs.add((fin, sym, finret, fin))
    states = {s0, s1, r0, r1, fin, finret, botq}
    accepting = {s0, s1, r0, r1, botq}
    return BuchiTreeAutomaton(states, labels, trs, s0, accepting)


def decode(alphabet, tree, cap=None):
    """The lasso word whose stack tree unfolds from the regular tree.

    Walks the cardinal branch, splicing in each matched call's right
    subtree as a finite word (right-first preorder); the period starts at
    the first repeated generator state on the branch.
    """
    limit = stage_cap(cap)
    budget = [limit]
    state = tree.root
    emitted = []
    seen = {}
    while True:
        if state in seen:
            split = seen[state]
            return LassoWord(alphabet, emitted[:split], emitted[split:])
        seen[state] = len(emitted)
        lab = tree.label(state)
        if lab == BOT:
            raise MalformedWitnessError("cardinal branch reaches bot")
        if lab not in alphabet:
            raise MalformedWitnessError("label %r outside the alphabet" % (lab,))
        emitted.append(lab)
        if alphabet.is_call(lab):
            lchild = tree.left[state]
            llab = tree.label(lchild)
            if llab == BOT:
                state = tree.right[state]
            elif alphabet.is_return(llab):
                emitted.extend(_finite_word(alphabet, tree,
                                            tree.right[state], set(), budget))
                state = lchild
            else:
                raise MalformedWitnessError(
                    "call node whose left child is %r" % (llab,))
        else:
            state = tree.left[state]


def _finite_word(alphabet, tree, state, path, budget):
    lab = tree.label(state)
    if lab == BOT:
        return []
    if state in path:
        raise MalformedWitnessError("cycle inside a finite tree region")
    budget[0] -= 1
    if budget[0] < 0:
        raise ResourceError("decoded finite region exceeds the cap",
                            stage="decode")
    if lab not in alphabet:
        raise MalformedWitnessError("label %r outside the alphabet" % (lab,))
    path.add(state)
    out = [lab]
    out.extend(_finite_word(alphabet, tree, tree.right[state], path, budget))
    out.extend(_finite_word(alphabet, tree, tree.left[state], path, budget))
    path.discard(state)
    return out


def cardinal_addresses(alphabet, tree, depth):
    """Addresses of the cardinal branch in a tree (or regular-tree
    unfolding), cut off at the given depth."""
    if isinstance(tree, RegularTree):
        tree = tree.unfold(depth)
    addrs = []
    addr = ""
    while len(addr) <= depth:
        lab = tree.label(addr)
        if lab == BOT:
            break
        addrs.append(addr)
        if alphabet.is_call(lab) and tree.label(addr + "0") == BOT:
            addr += "1"
        else:
            addr += "0"
    return addrs