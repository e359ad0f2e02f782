"""Finite and regular infinite binary trees over a label alphabet plus bot.

Node addresses are strings over {0, 1}: "" is the root, address + "0" the
left child, address + "1" the right child. Nodes absent from a FiniteTree
are implicitly labeled bot; a RegularTree is a finite generator whose
unfolding is an infinite tree.
"""

BOT = "⊥"


def render_label(label):
    return "bot" if label == BOT else str(label)


class FiniteTree:
    """Prefix-closed map address -> label storing only non-bot nodes."""

    def __init__(self, nodes):
        nodes = dict(nodes)
        for addr in nodes:
            if addr and addr[:-1] not in nodes:
                raise ValueError("node %r has no parent" % addr)
            if nodes[addr] == BOT:
                raise ValueError("explicit bot node %r" % addr)
        self.nodes = nodes

    def label(self, addr):
        return self.nodes.get(addr, BOT)

    def __eq__(self, other):
        return isinstance(other, FiniteTree) and self.nodes == other.nodes

    def __hash__(self):
        return hash(frozenset(self.nodes.items()))

    def __repr__(self):
        return "FiniteTree(%r)" % (self.nodes,)


class RegularTree:
    """Finite-state generator of an infinite binary tree.

    labels/left/right are total maps on the generator states.
    """

    def __init__(self, root, labels, left, right):
        self.root = root
        self.labels = dict(labels)
        self.left = dict(left)
        self.right = dict(right)
        for s in self.labels:
            if s not in self.left or s not in self.right:
                raise ValueError("child maps not total at state %r" % (s,))

    def label(self, state):
        return self.labels[state]

    def label_set(self):
        return set(self.labels.values())

    def __len__(self):
        return len(self.labels)

    def unfold(self, depth):
        """FiniteTree of all non-bot nodes with address length <= depth."""
        nodes = {}
        stack = [("", self.root)]
        while stack:
            addr, state = stack.pop()
            lab = self.labels[state]
            if lab == BOT:
                continue
            nodes[addr] = lab
            if len(addr) < depth:
                stack.append((addr + "0", self.left[state]))
                stack.append((addr + "1", self.right[state]))
        return FiniteTree(nodes)


def constant_tree(label):
    """The regular tree labeling every node with `label`."""
    return RegularTree("n", {"n": label}, {"n": "n"}, {"n": "n"})


def tree_to_dot(tree, depth=6, marked=()):
    """DOT rendering of a FiniteTree or a RegularTree unfolding.

    `marked` is a set of addresses drawn with a doubled border (used for
    the cardinal branch).
    """
    if isinstance(tree, RegularTree):
        tree = tree.unfold(depth)
    marked = set(marked)
    lines = ["digraph tree {", '  node [shape=circle];']
    addrs = sorted(tree.nodes, key=lambda a: (len(a), a))
    shown = set()
    for addr in addrs:
        shape = "doublecircle" if addr in marked else "circle"
        lines.append('  "n%s" [label="%s", shape=%s];'
                     % (addr, render_label(tree.label(addr)), shape))
        shown.add(addr)
    # bot children of shown nodes, so the binary shape is visible
    for addr in addrs:
        for b in "01":
            child = addr + b
            if len(child) <= depth and child not in shown and tree.label(child) == BOT:
                lines.append('  "n%s" [label="bot", shape=point];' % child)
    for addr in addrs:
        for b in "01":
            child = addr + b
            if len(child) > depth:
                continue
            if child in tree.nodes or tree.label(child) == BOT:
                lines.append('  "n%s" -> "n%s" [label="%s"];' % (addr, child, b))
    lines.append("}")
    return "\n".join(lines)
