# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense-network kernels.

Semantics mirror ``dqnlab.kernels.pyref``; keep both in lockstep. All
arrays are C-contiguous float64.
"""

import numpy as np

from libc.math cimport fabs, pow, sqrt


def affine_forward(double[:, ::1] x, double[:, ::1] w, double[::1] b):
    cdef Py_ssize_t n = x.shape[0], fin = x.shape[1], fout = w.shape[0]
    out = np.empty((n, fout))
    cdef double[:, ::1] y = out
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(n):
        for j in range(fout):
            acc = b[j]
            for k in range(fin):
                acc += x[i, k] * w[j, k]
            y[i, j] = acc
    return out


def affine_backward(double[:, ::1] x, double[:, ::1] w, double[:, ::1] dy):
    cdef Py_ssize_t n = x.shape[0], fin = x.shape[1], fout = w.shape[0]
    dx_arr = np.zeros((n, fin))
    dw_arr = np.zeros((fout, fin))
    db_arr = np.zeros(fout)
    cdef double[:, ::1] dx = dx_arr
    cdef double[:, ::1] dw = dw_arr
    cdef double[::1] db = db_arr
    cdef Py_ssize_t i, j, k
    cdef double g
    for i in range(n):
        for j in range(fout):
            g = dy[i, j]
            db[j] += g
            for k in range(fin):
                dx[i, k] += g * w[j, k]
                dw[j, k] += g * x[i, k]
    return dx_arr, dw_arr, db_arr


def relu_forward(double[:, ::1] z):
    cdef Py_ssize_t n = z.shape[0], m = z.shape[1]
    out = np.empty((n, m))
    cdef double[:, ::1] a = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            a[i, j] = z[i, j] if z[i, j] > 0.0 else 0.0
    return out


def relu_backward(double[:, ::1] z, double[:, ::1] da):
    cdef Py_ssize_t n = z.shape[0], m = z.shape[1]
    out = np.empty((n, m))
    cdef double[:, ::1] dz = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            dz[i, j] = da[i, j] if z[i, j] > 0.0 else 0.0
    return out


def apply_mask(double[:, ::1] a, double[:, ::1] mask, double scale):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[i, j] = a[i, j] * mask[i, j] * scale
    return out


def huber_elementwise(double[::1] pred, double[::1] target, double delta):
    cdef Py_ssize_t n = pred.shape[0]
    loss_arr = np.empty(n)
    grad_arr = np.empty(n)
    cdef double[::1] loss = loss_arr
    cdef double[::1] grad = grad_arr
    cdef Py_ssize_t i
    cdef double d
    for i in range(n):
        d = pred[i] - target[i]
        if fabs(d) <= delta:
            loss[i] = 0.5 * d * d
            grad[i] = d
        else:
            loss[i] = delta * fabs(d) - 0.5 * delta * delta
            grad[i] = delta if d > 0.0 else -delta
    return loss_arr, grad_arr


def clip_elementwise(double[::1] g, double limit):
    cdef Py_ssize_t n = g.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        if g[i] > limit:
            o[i] = limit
        elif g[i] < -limit:
            o[i] = -limit
        else:
            o[i] = g[i]
    return out


def adam_update(double[::1] p, double[::1] g, double[::1] m, double[::1] v,
                long t, double lr, double beta1, double beta2, double eps):
    cdef Py_ssize_t n = p.shape[0]
    cdef double bc1 = 1.0 - pow(beta1, t)
    cdef double bc2 = 1.0 - pow(beta2, t)
    cdef Py_ssize_t i
    cdef double mhat, vhat
    for i in range(n):
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i]
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i]
        mhat = m[i] / bc1
        vhat = v[i] / bc2
        p[i] -= lr * mhat / (sqrt(vhat) + eps)


def polyak_update(double[::1] target, double[::1] policy, double tau):
    cdef Py_ssize_t n = target.shape[0]
    cdef Py_ssize_t i
    if tau == 1.0:
        for i in range(n):
            target[i] = policy[i]
    else:
        for i in range(n):
            target[i] += tau * (policy[i] - target[i])
