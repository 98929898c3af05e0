# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_pykernels``; same functions, same contracts."""


cdef dict _prune(dict out):
    cdef dict res = {}
    for w, c in out.items():
        if c:
            res[w] = c
    return res


cdef inline int _parity(tuple word, list odd):
    cdef int p = 0
    cdef Py_ssize_t i
    for i in range(len(word)):
        p ^= <int>odd[<Py_ssize_t>word[i]]
    return p


cdef list _odd(degs):
    return [int(d) & 1 for d in degs]


def mul(dict a, dict b, Py_ssize_t maxlen):
    cdef dict out = {}
    cdef tuple u, w, k
    cdef Py_ssize_t room, lu
    cdef list blist
    if not a or not b:
        return out
    blist = sorted(b.items(), key=lambda t: len(t[0]))
    for u, c in a.items():
        lu = len(u)
        room = maxlen - lu
        if room < 0:
            continue
        for w, e in blist:
            if len(w) > room:
                break
            k = u + w
            v = out.get(k)
            if v is None:
                out[k] = c * e
            else:
                out[k] = v + c * e
    return _prune(out)


def bracket(dict a, dict b, degs, Py_ssize_t maxlen):
    cdef dict out = {}
    cdef list odd = _odd(degs)
    cdef tuple u, w, k
    cdef Py_ssize_t room
    cdef int pu, pw
    cdef list blist
    if not a or not b:
        return out
    blist = sorted(
        [(w, e, _parity(w, odd)) for w, e in b.items()], key=lambda t: len(t[0])
    )
    for u, c in a.items():
        room = maxlen - len(u)
        if room < 0:
            continue
        pu = _parity(u, odd)
        for item in blist:
            w = <tuple>item[0]
            if len(w) > room:
                break
            e = item[1]
            pw = <int>item[2]
            ce = c * e
            k = u + w
            v = out.get(k)
            out[k] = ce if v is None else v + ce
            k = w + u
            v = out.get(k)
            if pu & pw:
                out[k] = ce if v is None else v + ce
            else:
                out[k] = -ce if v is None else v - ce
    return _prune(out)


def derive(dict terms, list images, degs, Py_ssize_t maxlen):
    cdef dict out = {}
    cdef list odd = _odd(degs)
    cdef tuple u, w, k, pre, post
    cdef dict img
    cdef Py_ssize_t n, j, g, room
    cdef int sign
    for u, c in terms.items():
        n = len(u)
        sign = 1
        room = maxlen - n + 1
        for j in range(n):
            g = <Py_ssize_t>u[j]
            img = <dict>images[g]
            if img:
                pre = u[:j]
                post = u[j + 1:]
                sc = c if sign > 0 else -c
                for w, e in img.items():
                    if len(w) <= room:
                        k = pre + w + post
                        v = out.get(k)
                        out[k] = sc * e if v is None else v + sc * e
            if odd[g]:
                sign = -sign
    return _prune(out)


def permute(dict terms, perm, signs):
    cdef dict out = {}
    cdef tuple u
    cdef int s
    cdef Py_ssize_t i, n
    cdef list p = list(perm)
    cdef list sg = list(signs)
    cdef list buf
    for u, c in terms.items():
        s = 1
        n = len(u)
        buf = [None] * n
        for i in range(n):
            s *= <int>sg[<Py_ssize_t>u[i]]
            buf[i] = p[<Py_ssize_t>u[i]]
        out[tuple(buf)] = c if s > 0 else -c
    return out


def substitute(dict terms, list images, Py_ssize_t maxlen):
    cdef dict out = {}
    cdef dict acc
    cdef tuple u
    for u, c in terms.items():
        acc = {(): c}
        for g in u:
            acc = mul(acc, images[g], maxlen)
            if not acc:
                break
        for w, e in acc.items():
            v = out.get(w)
            out[w] = e if v is None else v + e
    return _prune(out)


def coproduct_defect(dict terms, degs):
    cdef dict out = {}
    cdef list odd = _odd(degs)
    cdef tuple u, key
    cdef Py_ssize_t n, i, mask, full
    cdef int sign, odd_right, oi
    cdef list left, right
    for u, c in terms.items():
        n = len(u)
        if n == 0:
            key = ((), ())
            v = out.get(key)
            out[key] = -c if v is None else v - c
            continue
        full = (1 << n) - 1
        for mask in range(1, full):
            left = []
            right = []
            sign = 0
            odd_right = 0
            for i in range(n):
                oi = <int>odd[<Py_ssize_t>u[i]]
                if (mask >> i) & 1:
                    left.append(u[i])
                    if oi:
                        sign ^= odd_right & 1
                else:
                    right.append(u[i])
                    odd_right += oi
            key = (tuple(left), tuple(right))
            v = out.get(key)
            val = -c if sign else c
            out[key] = val if v is None else v + val
    return _prune(out)


def dynkin(dict terms, degs):
    cdef dict out = {}
    cdef list odd = _odd(degs)
    cdef dict acc, nxt
    cdef tuple u, w, k
    cdef int p, gp, flip
    cdef Py_ssize_t j
    for u, c in terms.items():
        if not u:
            continue
        acc = {(u[0],): c}
        p = <int>odd[<Py_ssize_t>u[0]]
        for j in range(1, len(u)):
            g = u[j]
            gp = <int>odd[<Py_ssize_t>g]
            flip = p & gp
            nxt = {}
            for w, e in acc.items():
                k = w + (g,)
                v = nxt.get(k)
                nxt[k] = e if v is None else v + e
                k = (g,) + w
                v = nxt.get(k)
                if flip:
                    nxt[k] = e if v is None else v + e
                else:
                    nxt[k] = -e if v is None else v - e
            acc = nxt
            p ^= gp
        for w, e in acc.items():
            v = out.get(w)
            out[w] = e if v is None else v + e
    return _prune(out)
