"""Bridging a broken vessel.

Two 10 pixel segments with a 2 pixel gap. The plain connectivity filter sees
two pieces of size 10. The local-sensitive variant walks into the gap, finds
the far segment within its search radius and paints the bridge.
"""
import numpy as np

from vesselkit import LscfParams, connectivity_filter, ls_connectivity_filter

mask = np.zeros((5, 30), np.uint8)
mask[2, 2:12] = 1
mask[2, 14:24] = 1


def show(row):
    return "".join("#" if v else "." for v in row)


print("input      ", show(mask[2]))
print("CF scores  ", sorted(set(connectivity_filter(mask)[mask == 1].tolist())))

repaired, scores = ls_connectivity_filter(mask, LscfParams())
print("repaired   ", show(repaired[2]))
print("LS-CF score", sorted(set(scores[repaired == 1].tolist())))

# too little reach or budget leaves the gap open
for params in (LscfParams(max_dist=1), LscfParams(max_score=5)):
    repaired, _ = ls_connectivity_filter(mask, params)
    print(f"max_score={params.max_score:<3} max_dist={params.max_dist}", show(repaired[2]))
