"""Two-player Büchi games, solved by the classical repeated-attractor
fixpoint. Player 0 wins a play iff it visits accepting vertices infinitely
often; Büchi games are memoryless determined, and the solver returns a
memoryless strategy on player 0's winning region.
"""

import itertools

from .caps import stage_cap
from .errors import InputError, ResourceError


class BuchiGame:
    """owner: vertex -> 0|1; edges: vertex -> iterable of vertices;
    accepting: set of vertices. Dead ends are resolved at construction by
    routing them to a sink that loses for the stuck player."""

    LOSE0 = ("#sink", 0)
    LOSE1 = ("#sink", 1)

    def __init__(self, owner, edges, accepting, initial=None, cap=None):
        limit = stage_cap(cap)
        if len(owner) > limit:
            raise ResourceError("game exceeds vertex cap", stage="game")
        self.initial = initial
        self.owner = dict(owner)
        self.edges = {v: tuple(es) for v, es in edges.items()}
        for v in self.owner:
            if v not in self.edges:
                self.edges[v] = ()
        for v, es in self.edges.items():
            if v not in self.owner:
                raise InputError("edge source %r has no owner" % (v,))
            for w in es:
                if w not in self.owner:
                    raise InputError("edge target %r has no owner" % (w,))
        self.accepting = set(accepting) & set(self.owner)
        self._resolve_dead_ends()

    def _resolve_dead_ends(self):
        dead = [v for v, es in self.edges.items() if not es]
        if not dead:
            return
        # player 0 stuck: trap in a non-accepting loop; player 1 stuck:
        # trap in an accepting loop
        self.owner.setdefault(self.LOSE0, 0)
        self.edges.setdefault(self.LOSE0, (self.LOSE0,))
        self.owner.setdefault(self.LOSE1, 0)
        self.edges.setdefault(self.LOSE1, (self.LOSE1,))
        self.accepting.add(self.LOSE1)
        for v in dead:
            self.edges[v] = (self.LOSE0,) if self.owner[v] == 0 else (self.LOSE1,)


def _attractor(game, player, targets, domain, deterministic=False):
    """Vertices in `domain` from which `player` can force reaching `targets`
    (in zero or more steps), with the attraction rank order recorded.
    `deterministic` fixes the rank order across runs (set iteration order
    depends on the hash seed), which strategy extraction relies on."""
    targets = set(targets) & domain
    scan = sorted(domain, key=repr) if deterministic else domain
    preds = {v: [] for v in scan}
    out_deg = {}
    for v in scan:
        succ_in = [w for w in game.edges[v] if w in domain]
        out_deg[v] = len(succ_in)
        for w in succ_in:
            preds[w].append(v)
    attracted = set(targets)
    order = sorted(targets, key=repr) if deterministic else list(targets)
    queue = list(order)
    while queue:
        w = queue.pop()
        for v in preds[w]:
            if v in attracted:
                continue
            if game.owner[v] == player:
                attracted.add(v)
                order.append(v)
                queue.append(v)
            else:
                out_deg[v] -= 1
                if out_deg[v] == 0:
                    attracted.add(v)
                    order.append(v)
                    queue.append(v)
    return attracted, order


def solve_buchi_game(game):
    """Returns (win0, strategy): player 0's winning region and a memoryless
    winning strategy defined on the player-0 vertices inside it."""
    domain = set(game.owner)
    while True:
        recur, _ = _attractor(game, 0, game.accepting & domain, domain)
        escape = domain - recur
        if not escape:
            break
        lost, _ = _attractor(game, 1, escape, domain)
        domain -= lost
    win0 = domain
    strategy = {}
    if win0:
        attracted, order = _attractor(game, 0, game.accepting & win0, win0,
                                      deterministic=True)
        rank = {v: i for i, v in enumerate(order)}
        for v in win0:
            if game.owner[v] != 0:
                continue
            inside = [w for w in game.edges[v] if w in win0]
            if v in game.accepting:
                strategy[v] = inside[0]
            else:
                strategy[v] = min(inside, key=lambda w: rank.get(w, len(rank)))
    return win0, strategy


def winner_from(game, vertex):
    win0, _ = solve_buchi_game(game)
    return 0 if vertex in win0 else 1


def brute_force_win0(game, max_choices=1 << 14):
    """Exhaustive memoryless-strategy enumeration, the test oracle for the
    solver. A vertex is winning for player 0 iff some strategy makes every
    cycle reachable from it (in the strategy-restricted graph) touch an
    accepting vertex."""
    zero_vs = [v for v in game.owner if game.owner[v] == 0]
    option_lists = [game.edges[v] for v in zero_vs]
    total = 1
    for opts in option_lists:
        total *= max(1, len(opts))
    if total > max_choices:
        raise ResourceError("too many strategies to enumerate", stage="brute_force")
    win = set()
    for combo in itertools.product(*option_lists):
        sigma = dict(zip(zero_vs, combo))
        succ = {v: (sigma[v],) if game.owner[v] == 0 else game.edges[v]
                for v in game.owner}
        good = _winning_under(game, succ)
        win |= good
        if len(win) == len(game.owner):
            break
    return win


def _winning_under(game, succ):
    """Vertices from which every reachable cycle (player 1 steering) hits an
    accepting vertex: no lasso into a cycle inside the non-accepting part."""
    # vertices on non-accepting cycles
    bad_core = _has_cycle_within(set(game.owner) - game.accepting, succ)
    # anything that can reach the bad core loses
    lose = set(bad_core)
    changed = True
    while changed:
        changed = False
        for v in game.owner:
            if v in lose:
                continue
            if any(w in lose for w in succ[v]):
                lose.add(v)
                changed = True
    return set(game.owner) - lose


def _has_cycle_within(allowed, succ):
    """All vertices of `allowed` lying on a cycle that stays in `allowed`."""
    # iterative Tarjan-flavored: repeatedly strip vertices with no successor
    # inside `allowed`, what survives with a successor loop is cyclic
    alive = set(allowed)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            if not any(w in alive for w in succ[v]):
                alive.discard(v)
                changed = True
    # alive = vertices with infinite forward path inside allowed; among them,
    # cycle membership is what matters for reachability, and every vertex in
    # `alive` reaches a cycle inside `alive`, which is what callers need
    return alive