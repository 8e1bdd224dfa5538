"""Slow reference evaluators used to validate the accelerated code paths.

They share no code with the fast engines beyond ordinal and word arithmetic:
block runs are unrolled one omega-segment at a time, lambda enrichments are
enumerated explicitly and OTM runs are stepped cell by cell.
"""
from .ordinal import OMEGA, ONE, ZERO, add, left_subtract, multiply, ordinal, parse_ordinal
from .word import LAMBDA, BlockWord, symbol_at

__all__ = ["LAMBDA_RUNS", "unrolled_block_step", "enrichment_accepts", "segment_unrolled_run"]

LAMBDA_RUNS = tuple(parse_ordinal(t) for t in ("1", "2", "w", "w+1", "w*2", "w^2"))


def unrolled_block_step(A, q, s, n):
    """D(q, s^n) for n < w^2 by explicit omega-segment iteration."""
    n = ordinal(n)
    if n.terms and n.leading_exponent > 1:
        raise ValueError("oracle only handles runs below w^2")
    k = n.leading_coefficient if n.terms and n.leading_exponent == 1 else 0
    m = n.finite_part
    for _ in range(k):
        seen = []
        while q not in seen:
            seen.append(q)
            q = A.step(q, s)
            if q is None:
                return None
        cycle = seen[seen.index(q):]
        q = A.limit(frozenset(cycle))
        if q is None:
            return None
    for _ in range(m):
        q = A.step(q, s)
        if q is None:
            return None
    return q


def _pieces(w):
    """Split ``w`` at block boundaries and at offsets 1 and w inside blocks."""
    out = []
    for s, run in w.blocks:
        cuts = [c for c in (ordinal(1), parse_ordinal("w")) if c < run]
        prev = ordinal(0)
        for c in cuts:
            out.append(BlockWord([(s, _diff(prev, c))]))
            prev = c
        out.append(BlockWord([(s, _diff(prev, run))]))
    return out


def _diff(a, b):
    return left_subtract(a, b)


def enrichment_accepts(N, w, max_lambda_blocks=3):
    """Does some enrichment of ``w`` with at most three lambda blocks get accepted?"""
    pieces = _pieces(w)
    memo = {}

    def go(i, states, budget):
        key = (i, states, budget)
        if key in memo:
            return memo[key]
        result = False
        options = [states]
        if budget:
            for r in LAMBDA_RUNS:
                options.append(N.transition_set(states, BlockWord([(LAMBDA, r)])))
        for k, X in enumerate(options):
            b = budget - (k > 0)
            if i == len(pieces):
                if X & N.accepting:
                    result = True
            else:
                if go(i + 1, N.transition_set(X, pieces[i]), b):
                    result = True
            if result:
                break
        memo[key] = result
        return result

    return go(0, frozenset([N.start]), max_lambda_blocks)


# ---------------------------------------------------------------------------
# OTM reference: explicit omega-segments for inputs shorter than w^2
# ---------------------------------------------------------------------------

def _otm_token(w, p):
    if p == 0:
        return "lh"
    if p == add(ONE, w.length):
        return "rh"
    if p.is_finite():
        return symbol_at(w, int(p) - 1)
    return symbol_at(w, p)


def segment_unrolled_run(P, w, window=400, max_epochs=60):
    """Reference run of ``P`` on ``w`` (|w| < w^2).

    Each omega-segment of time is simulated step by step for ``window``
    steps.  If a full configuration repeats, the limit is the componentwise
    minimum over the loop.  Otherwise the head must be drifting to the right
    inside one omega-block; the limit control is the minimum over the last
    half of the window and the head moves to the next multiple of w.
    Returns ``(verdict, accept, time, space)`` or ``None`` when undecided.
    """
    rh = add(ONE, w.length)
    gamma = P.gamma
    T = ZERO
    c = (0, ZERO, 0, 0)
    ever = 0
    limits = {}          # configuration at the start of an epoch -> epoch number
    epoch_log = []       # (start time, start config, min over epoch)
    for epoch in range(max_epochs):
        if c in limits:
            a = limits[c]
            low = epoch_log[a][2]
            for _, _, m in epoch_log[a + 1:]:
                low = (min(low[0], m[0]), min(low[1], m[1]), low[2] & m[2], min(low[3], m[3]))
            if low == c:
                return ("diverges", None, None, None)
            t_a = epoch_log[a][0]
            T = add(t_a, multiply(left_subtract(t_a, T), OMEGA))
            c = low
            limits = {}
            epoch_log = []
        limits[c] = len(epoch_log)
        start_T = T
        trace = []
        seen = {}
        q, h, sc, sh = c
        outcome = None
        for k in range(window):
            cfg = (q, h, sc, sh)
            if q in P.halting:
                outcome = ("halted", P.halting[q], T, ever.bit_length())
                break
            if cfg in seen:
                break
            seen[cfg] = len(trace)
            trace.append(cfg)
            tok = _otm_token(w, h)
            rule = P.table.get((q, tok, (sc >> sh) & 1))
            if rule is None:
                outcome = ("stuck", None, T, ever.bit_length())
                break
            if rule.write:
                if sh >= gamma:
                    outcome = ("budget", None, T, (ever | (1 << sh)).bit_length())
                    break
                sc |= 1 << sh
            else:
                sc &= ~(1 << sh)
            ever |= sc
            if rule.smove == "R":
                if sh >= gamma:
                    outcome = ("budget", None, T, (ever | (1 << sh)).bit_length())
                    break
                sh += 1
            elif rule.smove == "L":
                sh = max(0, sh - 1)
            if rule.imove == "R":
                if h < rh:
                    h = add(h, ONE)
            elif rule.imove == "L":
                if h.is_limit():
                    h = ZERO
                elif not h.is_zero():
                    h = h.predecessor()
            q = rule.next
            T = add(T, ONE)
        else:
            cfg = None
        if outcome is not None:
            return outcome
        if cfg is not None and cfg in seen:
            loop = trace[seen[cfg]:]
            lim = (min(x[0] for x in loop), min(x[1] for x in loop), _and(x[2] for x in loop),
                   min(x[3] for x in loop))
            if lim == cfg:
                return ("diverges", None, None, None)
        else:
            tail = trace[len(trace) // 2:]
            heads = [x[1] for x in tail]
            block = heads[0].limit_part
            if any(x.limit_part != block for x in heads) or not heads[-1] > trace[len(trace) // 4][1]:
                return None
            lim = (min(x[0] for x in tail), add(block, OMEGA), _and(x[2] for x in tail),
                   min(x[3] for x in tail))
        whole = (min(x[0] for x in trace), min(x[1] for x in trace), _and(x[2] for x in trace),
                 min(x[3] for x in trace))
        epoch_log.append((start_T, c, (min(whole[0], lim[0]), min(whole[1], lim[1]),
                                       whole[2] & lim[2], min(whole[3], lim[3]))))
        T = add(start_T, OMEGA)
        c = (lim[0], lim[1], lim[2], lim[3])
    return None


def _and(values):
    out = -1
    for v in values:
        out &= v
    return out
