"""Plain-dict payloads for results, in a fixed field order."""

from .io import complex_pairs


def search_config(cfg, max_dim):
    return {"seed": cfg.seed, "restarts": cfg.restarts, "max_iters": cfg.max_iters,
            "tol": cfg.tol, "max_dim": max_dim}


def rank_one(res):
    out = {
        "verdict": res.verdict,
        "heuristic": not res.found,
        "best_ratio": res.best_ratio,
        "restarts_used": res.restarts_used,
        "seed": res.seed,
        "method": res.method,
        "certificate": None,
    }
    if res.certificate is not None:
        c = res.certificate
        out["certificate"] = {
            "sigma_ratio": c.sigma_ratio,
            "coeffs": complex_pairs(c.coeffs),
            "left": complex_pairs(c.left),
            "right": complex_pairs(c.right),
        }
    if res.notes:
        out["notes"] = list(res.notes)
    return out


def codebook(book):
    if book is None:
        return None
    return {
        "graph_dim": book.graph_dim,
        "size": len(book),
        "ortho_residual": book.ortho_residual,
        "graph_residual": book.graph_residual,
        "vectors": [complex_pairs(v) for v in book.vectors],
    }


def codebook_search(res):
    if res is None:
        return None
    return {"m": res.m, "success": res.success, "best_penalty": res.best_penalty,
            "restarts_used": res.restarts_used, "seed": res.seed}


def capacity(rep):
    out = {
        "alpha_lower": rep.alpha_lower,
        "alpha_exact": rep.alpha_exact,
        "bits_lower": rep.bits_lower,
        "power": rep.power,
        "bits_per_use": rep.bits_per_use,
        "method": rep.method,
        "failed_search": codebook_search(rep.failed_search),
        "zero_evidence": None,
        "notes": list(rep.notes),
        "codebook": codebook(rep.codebook),
    }
    if rep.zero_evidence is not None:
        ev = rep.zero_evidence
        out["zero_evidence"] = {"status": ev.status, "complement_dim": ev.complement_dim,
                                "rank_one": rank_one(ev.search)}
    return out


def activation(rep):
    return {
        "activated": rep.activated,
        "alpha_S": rep.alpha_S.best_alpha,
        "alpha_T": rep.alpha_T.best_alpha,
        "alpha_combined_lower": rep.alpha_combined.alpha_lower,
        "caveat": rep.caveat,
        "report_S": capacity(rep.alpha_S),
        "report_T": capacity(rep.alpha_T),
        "report_combined": capacity(rep.alpha_combined),
    }


def bilinear(w):
    return {
        "feasible": w.feasible,
        "heuristic": not w.feasible,
        "residual": w.residual,
        "restarts_used": w.restarts_used,
        "seed": w.seed,
        "A": complex_pairs(w.A),
        "B": complex_pairs(w.B),
    }


def graph_check(check, space):
    return {
        "is_noncomm_graph": check.ok,
        "dagger_closed": check.dagger_closed,
        "has_identity": check.has_identity,
        "dagger_residual": check.dagger_residual,
        "identity_residual": check.identity_residual,
        "diagnostic": check.diagnostic,
        "dim": space.dim,
        "ambient_rows": space.rows,
        "ambient_cols": space.cols,
    }


def suite(summary):
    return {
        "ok": summary.ok,
        "pairs": [
            {"S": p.s, "T": p.t, "alpha_S": p.alpha_s, "alpha_T": p.alpha_t,
             "alpha_combined": p.alpha_combined, "method": p.method, "activated": p.activated}
            for p in summary.pairs
        ],
        "full_factor": [{"S": name, "alpha_S_x_full": a, "alpha_S": b}
                        for name, a, b in summary.full_factor],
        "note": "finite one-shot checks only; asymptotic non-activation is not reproduced numerically",
    }
