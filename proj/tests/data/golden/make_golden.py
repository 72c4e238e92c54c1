# Regenerates the golden ordering files with scipy labeling:
#   python3 make_golden.py .
import numpy as np
from scipy import ndimage
import sys
out = sys.argv[1]
def had(N):
    H = np.array([[1]])
    while H.shape[0] < N:
        H = np.block([[H, H], [H, -H]])
    return H
four = ndimage.generate_binary_structure(2, 1)
for n in (2, 4, 8):
    H = had(n * n)
    areas, counts = [], []
    for k in range(n * n):
        p = (H[k].reshape(n, n) == 1).astype(int)
        lw, nw = ndimage.label(p, structure=four)
        lb, nb = ndimage.label(1 - p, structure=four)
        a = max(np.bincount(lw.ravel())[1:]) if nw else 0
        areas.append(a); counts.append(nw + nb)
    eahsi = sorted(range(n * n), key=lambda k: (-areas[k], k))
    base = sorted(range(n * n), key=lambda k: (counts[k], k))
    for name, order in (("eahsi", eahsi), ("region_count_baseline", base)):
        with open(f"{out}/order-n{n}-{name}-c4.txt", "w") as f:
            f.write(f"# spx-order v1 n={n} method={name} connectivity=4\n")
            f.write("".join(f"{k}\n" for k in order))
