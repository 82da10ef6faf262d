"""The pure-Python fallbacks give the same exact results as the fast backends."""
import os
import subprocess
import sys

SNIPPET = """
from painleve_d42.algebra import BACKEND
from painleve_d42.hamiltonian import build_H
from painleve_d42.numerics import BACKEND as NB
from painleve_d42.weyl import apply_word, generator, is_backlund_symmetry
from painleve_d42.holomorphy import ansatz_solve
pt = {"x": "1/3", "y": 1, "z": "2/7", "w": 2, "q": 5, "p": "1/9", "t": "3/2"}
img, al = apply_word("s1 s2 s3 s2 s1 s0", pt, ["1/2", "1/3", "1/7", "1/42"])
print(BACKEND, NB)
print(sorted((k, str(v)) for k, v in img.items()), [str(a) for a in al])
print(is_backlund_symmetry(generator(3), build_H()).ok)
s = ansatz_solve(seed=4)
print(s.dimension, s.family_contained, [str(c) for c in s.particular[:20]])
"""


def _run(pure):
    env = dict(os.environ)
    env.pop("PD42_PURE_PYTHON", None)
    if pure:
        env["PD42_PURE_PYTHON"] = "1"
    r = subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True, check=True)
    head, rest = r.stdout.split("\n", 1)
    return head.split(), rest


def test_backends_agree_exactly():
    fast, out_fast = _run(False)
    pure, out_pure = _run(True)
    assert pure == ["fractions", "python"]
    assert out_fast == out_pure
