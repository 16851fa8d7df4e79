"""
The dyadic order and its successor map
======================================

Binary sequences with an even number of differences are equivalent (F0).
On each class, L compares two sequences by the parity of x below the last
coordinate where they differ, and f moves to the next element.
"""

from cberlab.gallery import DyadicPoint, dyadic_successor, flip_head, l_compare, successor_check

x = DyadicPoint.parse("00000000:t")
walk = [x]
for _ in range(8):
    walk.append(dyadic_successor(walk[-1]))
print("orbit of 00000000t under f:", " -> ".join(str(p) for p in walk))
print("each step goes up in L:", all(l_compare(a, b).name == "LT" for a, b in zip(walk, walk[1:])))

# Flipping the first coordinate swaps the two parity classes and reverses L.
a, b = walk[2], walk[5]
print(f"{a} < {b}:", l_compare(a, b).name, "  after flip:", l_compare(flip_head(a), flip_head(b)).name)

# Exhaustive check on all 2^16 words with a common symbolic tail.
rep = successor_check(16)
print("words checked:", rep.checked, " counterexamples:", len(rep.counterexamples),
      " tops of class (f needs the tail):", rep.undefined)
