"""Deterministic least-squares regression trees for the boosted rankers.

Growth is best-first: the leaf whose best split removes the most squared
error is split next, until the leaf budget is reached or no split helps.
All ties (gain, feature, threshold) break toward the earlier candidate, so
the same inputs always build the same tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

_MIN_GAIN = 1e-12


@dataclass
class Node:
    feature: int = -1  # 0-based column; -1 marks a leaf
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    value: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


def _best_split(X: np.ndarray, y: np.ndarray, rows: np.ndarray,
                features: Sequence[int]):
    """Exhaustive scan; returns (gain, feature, threshold) or None."""
    n = rows.size
    if n < 2:
        return None
    y_rows = y[rows]
    total = float(y_rows.sum())
    total_sq = float((y_rows * y_rows).sum())
    parent_sse = total_sq - total * total / n
    best = None
    for f in features:
        vals = X[rows, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        sy = y_rows[order]
        cum = np.cumsum(sy)
        cum_sq = np.cumsum(sy * sy)
        for pos in range(1, n):
            if sv[pos] == sv[pos - 1]:
                continue
            left_n = pos
            left_sum = cum[pos - 1]
            left_sq = cum_sq[pos - 1]
            right_n = n - pos
            right_sum = total - left_sum
            right_sq = total_sq - left_sq
            sse = (left_sq - left_sum * left_sum / left_n) + \
                  (right_sq - right_sum * right_sum / right_n)
            gain = parent_sse - sse
            if gain > _MIN_GAIN and (best is None or gain > best[0]):
                threshold = (float(sv[pos - 1]) + float(sv[pos])) / 2.0
                best = (gain, f, threshold)
    return best


class RegressionTree:
    """Flat-array binary tree; node 0 is the root."""

    def __init__(self, nodes: list[Node]):
        self.nodes = nodes

    @property
    def leaf_count(self) -> int:
        return sum(1 for node in self.nodes if node.is_leaf)

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, max_leaves: int,
            features: Sequence[int]) -> "RegressionTree":
        all_rows = np.arange(X.shape[0])
        nodes = [Node(value=float(y.mean()) if y.size else 0.0)]
        rows_of = {0: all_rows}
        # pending: node_id -> (gain, feature, threshold), evaluated lazily
        pending: dict[int, tuple] = {}
        split = _best_split(X, y, all_rows, features)
        if split is not None:
            pending[0] = split
        n_leaves = 1
        while n_leaves < max_leaves and pending:
            node_id = max(pending, key=lambda nid: (pending[nid][0], -nid))
            gain, feature, threshold = pending.pop(node_id)
            rows = rows_of.pop(node_id)
            mask = X[rows, feature] <= threshold
            left_rows, right_rows = rows[mask], rows[~mask]
            left_id, right_id = len(nodes), len(nodes) + 1
            nodes[node_id] = Node(feature=feature, threshold=threshold,
                                  left=left_id, right=right_id)
            for child_id, child_rows in ((left_id, left_rows),
                                         (right_id, right_rows)):
                nodes.append(Node(value=float(y[child_rows].mean())))
                rows_of[child_id] = child_rows
                child_split = _best_split(X, y, child_rows, features)
                if child_split is not None:
                    pending[child_id] = child_split
            n_leaves += 1
        return cls(nodes)

    def _leaf_index(self, x) -> int:
        i = 0
        node = self.nodes[0]
        while not node.is_leaf:
            i = node.left if x[node.feature] <= node.threshold else node.right
            node = self.nodes[i]
        return i

    def predict_one(self, x) -> float:
        return self.nodes[self._leaf_index(x)].value

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.predict_one(row) for row in X])

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf node index for every row."""
        return np.array([self._leaf_index(row) for row in X], dtype=np.intp)

    def set_leaf_values(self, values: dict[int, float]) -> None:
        for node_id, value in values.items():
            node = self.nodes[node_id]
            if not node.is_leaf:
                raise ValueError(f"node {node_id} is not a leaf")
            node.value = float(value)

    def to_lines(self) -> Iterator[str]:
        yield f"nodes {len(self.nodes)}"
        for node in self.nodes:
            if node.is_leaf:
                yield f"leaf {node.value!r}"
            else:
                # feature serialized as the 1-based slot of the dataset format
                yield (f"split {node.feature + 1} {node.threshold!r} "
                       f"{node.left} {node.right}")

    @classmethod
    def from_lines(cls, lines: Iterator[str]) -> "RegressionTree":
        head = next(lines).split()
        count = int(head[1])
        nodes = []
        for _ in range(count):
            fields = next(lines).split()
            if fields[0] == "leaf":
                nodes.append(Node(value=float(fields[1])))
            else:
                nodes.append(Node(feature=int(fields[1]) - 1,
                                  threshold=float(fields[2]),
                                  left=int(fields[3]), right=int(fields[4])))
        return cls(nodes)
