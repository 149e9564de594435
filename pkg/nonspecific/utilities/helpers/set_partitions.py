from collections.abc import Iterator, Sequence


def bell_number(n: int) -> int:
    """
    Number of set partitions of n items, from the Bell triangle.

    Example:
        bell_number(4) -> 15
    """
    row = [1]
    for _ in range(n):
        next_row = [row[-1]]
        for value in row:
            next_row.append(next_row[-1] + value)
        row = next_row
    return row[0]


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """
    Enumerate every set partition of n items as a restricted growth string.

    Item i gets block label a[i] with a[0] = 0 and a[i] <= max(a[:i]) + 1,
    so each partition appears exactly once, blocks numbered by first appearance.
    """
    if n < 1:
        return

    prefix = [0]

    def extend(top: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for label in range(top + 2):
            prefix.append(label)
            yield from extend(max(top, label))
            prefix.pop()

    yield from extend(0)


def blocks_of(labels: Sequence[int]) -> list[list[int]]:
    """
    Group item positions by block label.

    Example:
        blocks_of((0, 1, 1, 0)) -> [[0, 3], [1, 2]]
    """
    blocks: list[list[int]] = [[] for _ in range(max(labels) + 1)] if labels else []
    for position, label in enumerate(labels):
        blocks[label].append(position)
    return blocks
