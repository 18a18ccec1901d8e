from typing import List, Sequence, Tuple


def allocate_largest_remainder(total: int, weights: Sequence[int], tie_keys: Sequence[int]) -> List[int]:
    """
    Split the integer `total` proportionally to `weights` so the parts sum to
    `total` exactly.

    Every part starts at floor(total * w / W); the leftover units go one each
    to the parts with the largest fractional remainders, ties going to the
    lower tie key.

    >>> allocate_largest_remainder(10, [1, 1, 1], [0, 1, 2])
    [4, 3, 3]
    """
    weight_total = sum(weights)
    if weight_total <= 0:
        raise ValueError("weights must have a positive sum")
    if total < 0:
        raise ValueError("total must be non-negative")

    parts = []
    remainders = []
    for idx, weight in enumerate(weights):
        quotient, remainder = divmod(total * weight, weight_total)
        parts.append(quotient)
        remainders.append((-remainder, tie_keys[idx], idx))

    leftover = total - sum(parts)
    if leftover:
        remainders.sort()
        for _, _, idx in remainders[:leftover]:
            parts[idx] += 1
    return parts


def equal_shares(total: int, addresses: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
    """`total` split evenly over sorted `addresses`; zero shares are dropped."""
    if not addresses:
        return ()
    shares = allocate_largest_remainder(total, [1] * len(addresses), addresses)
    return tuple((a, s) for a, s in zip(addresses, shares) if s > 0)
