# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: permutation composition, Schreier-vector orbits,
sifting, Schreier-generator sweeps, and the Paige Cayley-table fill.

Mirrors _kernels_py exactly; see that module for the data-layout contract.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

cnp.import_array()

ctypedef cnp.int32_t i32
ctypedef cnp.int16_t i16


def backend_name():
    return "c"


cdef inline i32* data32(object arr):
    return <i32*> cnp.PyArray_DATA(<cnp.ndarray> arr)


cdef inline i16* data16(object arr):
    return <i16*> cnp.PyArray_DATA(<cnp.ndarray> arr)


def compose(cnp.ndarray[i32, ndim=1] p, cnp.ndarray[i32, ndim=1] q):
    cdef Py_ssize_t d = p.shape[0], i
    cdef cnp.ndarray[i32, ndim=1] out = np.empty(d, dtype=np.int32)
    cdef i32* pp = &p[0]
    cdef i32* qq = &q[0]
    cdef i32* oo = &out[0]
    for i in range(d):
        oo[i] = qq[pp[i]]
    return out


def compose_into(cnp.ndarray[i32, ndim=1] p, cnp.ndarray[i32, ndim=1] q,
                 cnp.ndarray[i32, ndim=1] out):
    # out may alias p, never q
    cdef Py_ssize_t d = p.shape[0], i
    cdef i32* pp = &p[0]
    cdef i32* qq = &q[0]
    cdef i32* oo = &out[0]
    for i in range(d):
        oo[i] = qq[pp[i]]
    return out


def invert(cnp.ndarray[i32, ndim=1] p):
    cdef Py_ssize_t d = p.shape[0], i
    cdef cnp.ndarray[i32, ndim=1] out = np.empty(d, dtype=np.int32)
    cdef i32* pp = &p[0]
    cdef i32* oo = &out[0]
    for i in range(d):
        oo[pp[i]] = <i32> i
    return out


def is_identity(cnp.ndarray[i32, ndim=1] p):
    cdef Py_ssize_t d = p.shape[0], i
    cdef i32* pp = &p[0]
    for i in range(d):
        if pp[i] != <i32> i:
            return False
    return True


def orbit_update(cnp.ndarray[i32, ndim=2] gs, cnp.ndarray[i32, ndim=1] sv,
                 cnp.ndarray[i32, ndim=1] dep, cnp.ndarray[i32, ndim=1] pos,
                 cnp.ndarray[i32, ndim=1] orbit, int norbit, int base,
                 int fresh):
    cdef Py_ssize_t d = sv.shape[0]
    cdef Py_ssize_t nrows = gs.shape[0]
    cdef i32* svp = &sv[0]
    cdef i32* depp = &dep[0]
    cdef i32* posp = &pos[0]
    cdef i32* orbp = &orbit[0]
    cdef i32* gsp
    cdef i32* queue = <i32*> malloc(d * sizeof(i32))
    cdef Py_ssize_t qh = 0, qt = 0, er
    cdef int x, y, maxdep = 0
    cdef Py_ssize_t i
    if nrows > 0:
        gsp = &gs[0, 0]
    else:
        gsp = NULL
    if fresh or norbit == 0:
        for i in range(d):
            svp[i] = -1
            depp[i] = 0
        svp[base] = -2
        if posp[base] < 0:
            posp[base] = norbit
            orbp[norbit] = base
            norbit += 1
        queue[qt] = base
        qt += 1
    else:
        # extension: seed with the whole current orbit, labels kept
        for i in range(norbit):
            queue[qt] = orbp[i]
            qt += 1
            if depp[orbp[i]] > maxdep:
                maxdep = depp[orbp[i]]
    while qh < qt:
        x = queue[qh]
        qh += 1
        for er in range(nrows):
            y = gsp[er * d + x]
            if svp[y] == -1:
                svp[y] = <i32> er
                depp[y] = depp[x] + 1
                if depp[y] > maxdep:
                    maxdep = depp[y]
                if posp[y] < 0:
                    posp[y] = norbit
                    orbp[norbit] = y
                    norbit += 1
                queue[qt] = y
                qt += 1
    free(queue)
    return norbit, maxdep


def transversal_fill(cnp.ndarray[i32, ndim=2] gs, cnp.ndarray[i32, ndim=1] sv,
                     cnp.ndarray[i32, ndim=1] pos, cnp.ndarray[i32, ndim=1] orbit,
                     int norbit, int base, cnp.ndarray[i32, ndim=2] uinv):
    cdef Py_ssize_t d = sv.shape[0]
    cdef i32* svp = &sv[0]
    cdef i32* posp = &pos[0]
    cdef i32* orbp = &orbit[0]
    cdef i32* up = &uinv[0, 0]
    cdef i32* gsp = NULL
    if gs.shape[0] > 0:
        gsp = &gs[0, 0]
    cdef char* filled = <char*> malloc(d)
    cdef i32* path = <i32*> malloc(d * sizeof(i32))
    cdef Py_ssize_t i, k, m
    cdef int x, parent, er
    cdef i32* row
    cdef i32* par_row
    cdef i32* grow
    for i in range(d):
        filled[i] = 0
    row = up + <Py_ssize_t> posp[base] * d
    for i in range(d):
        row[i] = <i32> i
    filled[base] = 1
    for k in range(norbit):
        x = orbp[k]
        if filled[x]:
            continue
        m = 0
        while not filled[x]:
            path[m] = x
            m += 1
            er = svp[x]
            x = gsp[(er ^ 1) * d + x]
        # x is a filled ancestor; unwind
        while m > 0:
            m -= 1
            parent = x
            x = path[m]
            er = svp[x]
            grow = gsp + (er ^ 1) * d
            par_row = up + <Py_ssize_t> posp[parent] * d
            row = up + <Py_ssize_t> posp[x] * d
            for i in range(d):
                row[i] = par_row[grow[i]]
            filled[x] = 1
    free(filled)
    free(path)


cdef struct Chain:
    Py_ssize_t nlev
    Py_ssize_t d
    int* bases
    int* norbits
    i32** svs
    i32** gss
    i32** poss
    i32** uinvs  # NULL when not cached


cdef int chain_pack(Chain* ch, list bases, list svs, list genstacks,
                    list uinvs, list poss, list norbits) except -1:
    cdef Py_ssize_t nlev = len(bases)
    ch.nlev = nlev
    ch.d = (<cnp.ndarray> svs[0]).shape[0] if nlev else 0
    ch.bases = <int*> malloc(nlev * sizeof(int))
    ch.norbits = <int*> malloc(nlev * sizeof(int))
    ch.svs = <i32**> malloc(nlev * sizeof(i32*))
    ch.gss = <i32**> malloc(nlev * sizeof(i32*))
    ch.poss = <i32**> malloc(nlev * sizeof(i32*))
    ch.uinvs = <i32**> malloc(nlev * sizeof(i32*))
    cdef Py_ssize_t l
    for l in range(nlev):
        ch.bases[l] = bases[l]
        if norbits is not None:
            ch.norbits[l] = norbits[l]
        else:
            ch.norbits[l] = 0
        ch.svs[l] = data32(svs[l])
        g = genstacks[l]
        if (<cnp.ndarray> g).shape[0] > 0:
            ch.gss[l] = data32(g)
        else:
            ch.gss[l] = NULL
        ch.poss[l] = data32(poss[l])
        u = uinvs[l]
        if u is None:
            ch.uinvs[l] = NULL
        else:
            ch.uinvs[l] = data32(u)
    return 0


cdef void chain_free(Chain* ch):
    free(ch.bases)
    free(ch.norbits)
    free(ch.svs)
    free(ch.gss)
    free(ch.poss)
    free(ch.uinvs)


cdef inline void apply_right(i32* t, i32* row, Py_ssize_t d) nogil:
    cdef Py_ssize_t i
    for i in range(d):
        t[i] = row[t[i]]


cdef Py_ssize_t c_sift(i32* h, Py_ssize_t start, Chain* ch) nogil:
    """Reduce h level by level; return the stuck level or nlev."""
    cdef Py_ssize_t lev
    cdef Py_ssize_t d = ch.d
    cdef int b, x, er
    cdef i32* sv
    for lev in range(start, ch.nlev):
        b = ch.bases[lev]
        x = h[b]
        if x == b:
            continue
        sv = ch.svs[lev]
        if sv[x] == -1:
            return lev
        if ch.uinvs[lev] != NULL:
            apply_right(h, ch.uinvs[lev] + <Py_ssize_t> ch.poss[lev][x] * d, d)
        else:
            while x != b:
                er = sv[x]
                apply_right(h, ch.gss[lev] + <Py_ssize_t> (er ^ 1) * d, d)
                x = h[b]
    return ch.nlev


def sift_run(cnp.ndarray[i32, ndim=1] h, int start, list bases, list svs,
             list genstacks, list uinvs, list poss):
    cdef Chain ch
    chain_pack(&ch, bases, svs, genstacks, uinvs, poss, None)
    cdef Py_ssize_t stop = c_sift(&h[0], start, &ch)
    chain_free(&ch)
    return stop


def sweep_gen(int lev, int gi, int startpos, list bases, list svs,
              list genstacks, list uinvs, list poss, list orbits,
              list norbits):
    cdef Chain ch
    chain_pack(&ch, bases, svs, genstacks, uinvs, poss, norbits)
    cdef Py_ssize_t d = ch.d
    cdef i32* orbp = data32(orbits[lev])
    cdef i32* gsp = ch.gss[lev]
    cdef i32* svp = ch.svs[lev]
    cdef i32* uip = ch.uinvs[lev]
    cdef i32* posp = ch.poss[lev]
    cdef int base = ch.bases[lev]
    cdef int nstop = ch.norbits[lev]
    cdef i32* srow = gsp + <Py_ssize_t> (2 * gi) * d
    cdef i32* t = <i32*> malloc(d * sizeof(i32))
    cdef i32* path = <i32*> malloc(d * sizeof(i32))
    cdef Py_ssize_t posi, i, m, stop
    cdef int p, x, er
    cdef bint ok
    cdef cnp.ndarray[i32, ndim=1] residue
    for posi in range(startpos, nstop):
        p = orbp[posi]
        if uip != NULL:
            # t = u_p = inverse of the cached u_p^{-1}
            for i in range(d):
                t[uip[posi * d + i]] = <i32> i
        else:
            m = 0
            x = p
            while x != base:
                er = svp[x]
                path[m] = er
                m += 1
                x = gsp[<Py_ssize_t> (er ^ 1) * d + x]
            for i in range(d):
                t[i] = <i32> i
            while m > 0:
                m -= 1
                apply_right(t, gsp + <Py_ssize_t> path[m] * d, d)
        apply_right(t, srow, d)
        stop = c_sift(t, lev, &ch)
        ok = stop == ch.nlev
        if ok:
            for i in range(d):
                if t[i] != <i32> i:
                    ok = False
                    break
        if not ok:
            residue = np.empty(d, dtype=np.int32)
            memcpy(&residue[0], t, d * sizeof(i32))
            free(t)
            free(path)
            chain_free(&ch)
            return posi, residue
    free(t)
    free(path)
    chain_free(&ch)
    return nstop, None


def paige_table(cnp.ndarray[i16, ndim=2] reps, cnp.ndarray[i16, ndim=2] mul,
                cnp.ndarray[i16, ndim=2] add, cnp.ndarray[i16, ndim=2] sub,
                cnp.ndarray[i16, ndim=1] neg, cnp.ndarray[i32, ndim=1] addr,
                cnp.ndarray out, int do_canon):
    cdef Py_ssize_t n = reps.shape[0]
    cdef Py_ssize_t q = mul.shape[0]
    cdef i16* R = &reps[0, 0]
    cdef i16* M = &mul[0, 0]
    cdef i16* A = &add[0, 0]
    cdef i16* S = &sub[0, 0]
    cdef i16* NG = &neg[0]
    cdef i32* AD = &addr[0]
    cdef bint out16 = out.dtype == np.int16
    cdef i16* O16 = data16(out) if out16 else NULL
    cdef i32* O32 = NULL if out16 else data32(out)
    cdef Py_ssize_t i, j, c
    cdef i16* x
    cdef i16* y
    cdef i16 z[8]
    cdef i16 zn[8]
    cdef int use_neg
    cdef long key
    cdef i32 val

    cdef i16 a1, b1, a2, b2

    for i in range(n):
        x = R + i * 8
        a1 = x[0]; b1 = x[1]
        for j in range(n):
            y = R + j * 8
            a2 = y[0]; b2 = y[1]
            # a' = a1 a2 + v1.w2 ; b' = b1 b2 + w1.v2
            z[0] = A[M[a1 * q + a2] * q +
                     A[A[M[x[2] * q + y[5]] * q + M[x[3] * q + y[6]]] * q +
                       M[x[4] * q + y[7]]]]
            z[1] = A[M[b1 * q + b2] * q +
                     A[A[M[x[5] * q + y[2]] * q + M[x[6] * q + y[3]]] * q +
                       M[x[7] * q + y[4]]]]
            # v' = a1 v2 + b2 v1 - w1 x w2
            z[2] = S[A[M[a1 * q + y[2]] * q + M[b2 * q + x[2]]] * q +
                     S[M[x[6] * q + y[7]] * q + M[x[7] * q + y[6]]]]
            z[3] = S[A[M[a1 * q + y[3]] * q + M[b2 * q + x[3]]] * q +
                     S[M[x[7] * q + y[5]] * q + M[x[5] * q + y[7]]]]
            z[4] = S[A[M[a1 * q + y[4]] * q + M[b2 * q + x[4]]] * q +
                     S[M[x[5] * q + y[6]] * q + M[x[6] * q + y[5]]]]
            # w' = a2 w1 + b1 w2 + v1 x v2
            z[5] = A[A[M[a2 * q + x[5]] * q + M[b1 * q + y[5]]] * q +
                     S[M[x[3] * q + y[4]] * q + M[x[4] * q + y[3]]]]
            z[6] = A[A[M[a2 * q + x[6]] * q + M[b1 * q + y[6]]] * q +
                     S[M[x[4] * q + y[2]] * q + M[x[2] * q + y[4]]]]
            z[7] = A[A[M[a2 * q + x[7]] * q + M[b1 * q + y[7]]] * q +
                     S[M[x[2] * q + y[3]] * q + M[x[3] * q + y[2]]]]
            # canonical coset label: lexicographic min of z and -z
            use_neg = 0
            if do_canon:
                for c in range(8):
                    zn[c] = NG[z[c]]
                    if use_neg == 0:
                        if zn[c] < z[c]:
                            use_neg = 1
                        elif zn[c] > z[c]:
                            use_neg = -1
            key = 0
            if use_neg == 1:
                for c in range(8):
                    key = key * q + zn[c]
            else:
                for c in range(8):
                    key = key * q + z[c]
            val = AD[key]
            if val < 0:
                return -1
            if out16:
                O16[i * n + j] = <i16> val
            else:
                O32[i * n + j] = val
    return 0
