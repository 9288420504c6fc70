/* One RK4 step of the star model in the interaction picture.
 *
 * Emitter a couples to modes x_k through c_k E_k, with E_k = e^{i D_k t}:
 *   da/dt = -i sum_k c_k E_k x_k,   dx_k/dt = -i c_k conj(E_k) a.
 * On entry (er, ei) hold E at the step start; on exit they hold E at t + dt,
 * advanced by two applications of the half-step multiplier (hr, hi).
 * Complex arrays are split into real and imaginary parts; restrict lets the
 * compiler vectorise the four passes over the modes.
 */
#ifndef HYBRID_COHERENCE_STAR_STEP_H
#define HYBRID_COHERENCE_STAR_STEP_H

#include <stddef.h>

static void star_step(ptrdiff_t n, double dt, const double *restrict c,
                      double *restrict er, double *restrict ei,
                      const double *restrict hr, const double *restrict hi,
                      double *restrict xr, double *restrict xi,
                      double *restrict sr, double *restrict si,
                      double *restrict accr, double *restrict acci,
                      double *a_re, double *a_im)
{
    const double h2 = 0.5 * dt, h6 = dt / 6.0;
    const double ar = *a_re, ai = *a_im;
    double sumr, sumi, asr, asi, aar, aai, cr, ci, tr, ti, e;
    ptrdiff_t k;

    /* stage 1 at t: stage state is x */
    sumr = 0.0; sumi = 0.0;
    for (k = 0; k < n; k++) {
        cr = c[k] * er[k]; ci = c[k] * ei[k];
        sumr += cr * xr[k] - ci * xi[k];
        sumi += cr * xi[k] + ci * xr[k];
        tr = cr * ai - ci * ar;
        ti = -(cr * ar + ci * ai);
        accr[k] = tr; acci[k] = ti;
        sr[k] = xr[k] + h2 * tr; si[k] = xi[k] + h2 * ti;
    }
    aar = sumi; aai = -sumr;
    asr = ar + h2 * sumi; asi = ai - h2 * sumr;

    /* stage 2 at t + h/2 */
    sumr = 0.0; sumi = 0.0;
    for (k = 0; k < n; k++) {
        e = er[k] * hr[k] - ei[k] * hi[k];
        ei[k] = er[k] * hi[k] + ei[k] * hr[k];
        er[k] = e;
        cr = c[k] * er[k]; ci = c[k] * ei[k];
        sumr += cr * sr[k] - ci * si[k];
        sumi += cr * si[k] + ci * sr[k];
        tr = cr * asi - ci * asr;
        ti = -(cr * asr + ci * asi);
        accr[k] += 2.0 * tr; acci[k] += 2.0 * ti;
        sr[k] = xr[k] + h2 * tr; si[k] = xi[k] + h2 * ti;
    }
    aar += 2.0 * sumi; aai -= 2.0 * sumr;
    asr = ar + h2 * sumi; asi = ai - h2 * sumr;

    /* stage 3 at t + h/2, same phase */
    sumr = 0.0; sumi = 0.0;
    for (k = 0; k < n; k++) {
        cr = c[k] * er[k]; ci = c[k] * ei[k];
        sumr += cr * sr[k] - ci * si[k];
        sumi += cr * si[k] + ci * sr[k];
        tr = cr * asi - ci * asr;
        ti = -(cr * asr + ci * asi);
        accr[k] += 2.0 * tr; acci[k] += 2.0 * ti;
        sr[k] = xr[k] + dt * tr; si[k] = xi[k] + dt * ti;
    }
    aar += 2.0 * sumi; aai -= 2.0 * sumr;
    asr = ar + dt * sumi; asi = ai - dt * sumr;

    /* stage 4 at t + h, folded into the update of x */
    sumr = 0.0; sumi = 0.0;
    for (k = 0; k < n; k++) {
        e = er[k] * hr[k] - ei[k] * hi[k];
        ei[k] = er[k] * hi[k] + ei[k] * hr[k];
        er[k] = e;
        cr = c[k] * er[k]; ci = c[k] * ei[k];
        sumr += cr * sr[k] - ci * si[k];
        sumi += cr * si[k] + ci * sr[k];
        xr[k] += h6 * (accr[k] + cr * asi - ci * asr);
        xi[k] += h6 * (acci[k] - (cr * asr + ci * asi));
    }
    aar += sumi; aai -= sumr;
    *a_re = ar + h6 * aar;
    *a_im = ai + h6 * aai;
}

#endif
