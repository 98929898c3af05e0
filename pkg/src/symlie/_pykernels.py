"""Pure-Python implementations of the sparse word-polynomial kernels.

Every function works on *term maps*: dicts from words (tuples of generator
indices) to exact rational coefficients.  Inputs are never mutated and the
returned dicts never contain zero coefficients.  ``_ckernels.pyx`` mirrors
this module function for function.
"""


def _prune(out):
    return {w: c for w, c in out.items() if c}


def _parity(word, degs):
    p = 0
    for g in word:
        p ^= degs[g] & 1
    return p


def mul(a, b, maxlen):
    """Concatenation product, dropping words longer than ``maxlen``."""
    out = {}
    if not a or not b:
        return out
    blist = sorted(b.items(), key=lambda t: len(t[0]))
    for u, c in a.items():
        room = maxlen - len(u)
        if room < 0:
            continue
        for w, e in blist:
            if len(w) > room:
                break
            k = u + w
            out[k] = out.get(k, 0) + c * e
    return _prune(out)


def bracket(a, b, degs, maxlen):
    """Graded commutator ``ab - (-1)^{|a||b|} ba`` extended bilinearly."""
    out = {}
    if not a or not b:
        return out
    blist = sorted(
        ((w, e, _parity(w, degs)) for w, e in b.items()), key=lambda t: len(t[0])
    )
    for u, c in a.items():
        room = maxlen - len(u)
        if room < 0:
            continue
        pu = _parity(u, degs)
        for w, e, pw in blist:
            if len(w) > room:
                break
            ce = c * e
            k = u + w
            out[k] = out.get(k, 0) + ce
            k = w + u
            if pu & pw:
                out[k] = out.get(k, 0) + ce
            else:
                out[k] = out.get(k, 0) - ce
    return _prune(out)


def derive(terms, images, degs, maxlen):
    """Extend an odd derivation given on generators to words (graded Leibniz).

    ``images[g]`` is the term map of the image of generator ``g``.
    """
    out = {}
    for u, c in terms.items():
        n = len(u)
        sign = 1
        for j in range(n):
            g = u[j]
            img = images[g]
            if img:
                pre = u[:j]
                post = u[j + 1:]
                room = maxlen - n + 1
                sc = c if sign > 0 else -c
                for w, e in img.items():
                    if len(w) <= room:
                        k = pre + w + post
                        out[k] = out.get(k, 0) + sc * e
            if degs[g] & 1:
                sign = -sign
    return _prune(out)


def permute(terms, perm, signs):
    """Apply a signed permutation of generators letterwise."""
    out = {}
    for u, c in terms.items():
        s = 1
        for g in u:
            s *= signs[g]
        out[tuple(perm[g] for g in u)] = c if s > 0 else -c
    return out


def substitute(terms, images, maxlen):
    """Algebra morphism sending generator ``g`` to the term map ``images[g]``."""
    out = {}
    for u, c in terms.items():
        acc = {(): c}
        for g in u:
            acc = mul(acc, images[g], maxlen)
            if not acc:
                break
        for w, e in acc.items():
            out[w] = out.get(w, 0) + e
    return _prune(out)


def coproduct_defect(terms, degs):
    """``Δ(w) - w⊗1 - 1⊗w`` for the graded deshuffle coproduct.

    Generators are primitive and the twist carries the Koszul sign, so a word
    splits over every subset of its positions.  Returned as a term map keyed
    by ``(left_word, right_word)``; the constant term contributes ``1⊗1``.
    """
    out = {}
    for u, c in terms.items():
        n = len(u)
        if n == 0:
            # Δ(1) = 1⊗1, while w⊗1 + 1⊗w = 2(1⊗1)
            out[((), ())] = out.get(((), ()), 0) - c
            continue
        odd = [degs[g] & 1 for g in u]
        full = (1 << n) - 1
        for mask in range(1, full):
            left = []
            right = []
            sign = 0
            odd_right = 0
            for i in range(n):
                if mask >> i & 1:
                    left.append(u[i])
                    # move past the odd letters already sent right
                    if odd[i]:
                        sign ^= odd_right & 1
                else:
                    right.append(u[i])
                    odd_right += odd[i]
            k = (tuple(left), tuple(right))
            out[k] = out.get(k, 0) + (-c if sign else c)
    return _prune(out)


def dynkin(terms, degs):
    """Left-normed bracketing ``g1 g2 ... gn -> [..[[g1, g2], g3].., gn]``."""
    out = {}
    for u, c in terms.items():
        if not u:
            continue
        acc = {(u[0],): c}
        p = degs[u[0]] & 1
        for g in u[1:]:
            gp = degs[g] & 1
            nxt = {}
            flip = p & gp
            for w, e in acc.items():
                k = w + (g,)
                nxt[k] = nxt.get(k, 0) + e
                k = (g,) + w
                nxt[k] = nxt.get(k, 0) + (e if flip else -e)
            acc = nxt
            p ^= gp
        for w, e in acc.items():
            out[w] = out.get(w, 0) + e
    return _prune(out)
