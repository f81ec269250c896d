# /// script
# requires-python = ">=3.11,<3.15"
# dependencies = [
#     "polaris",
#     "marimo>=0.23.3",
# ]
#
# [tool.uv.sources]
# polaris = { path = "../", editable = true }
#
# ///

import marimo

__generated_with = "0.23.6"
app = marimo.App(width="medium")


@app.cell
def _():
    import marimo as mo
    from polaris import (
        GrassmannGraph,
        apartment,
        build_polar_space,
        check_clique_images,
        halfcube_split_and_g,
        verify_theorem,
    )
    from polaris.apartments import generated_set, perturb
    from polaris.search import Pattern, search_embeddings
    from polaris.util import make_rng

    return (
        GrassmannGraph,
        Pattern,
        apartment,
        build_polar_space,
        check_clique_images,
        generated_set,
        halfcube_split_and_g,
        make_rng,
        mo,
        perturb,
        search_embeddings,
        verify_theorem,
    )


@app.cell(hide_code=True)
def _(mo):
    kind = mo.ui.dropdown(["symplectic", "hyperbolic", "parabolic"], value="symplectic", label="kind")
    n = mo.ui.slider(2, 4, value=3, label="rank n")
    p = mo.ui.dropdown(["2", "3", "5"], value="2", label="p")
    mo.hstack([kind, n, p])
    return kind, n, p


@app.cell
def _(build_polar_space, kind, n, p):
    polar = build_polar_space(kind.value, n.value, int(p.value))
    print(polar, len(polar), "points")
    print(polar.check_axioms())
    return (polar,)


@app.cell
def _(GrassmannGraph, polar):
    for k in range(polar.rank):
        gg = GrassmannGraph(polar, k)
        print(f"Γ_{k}: {len(gg)} vertices, {gg.graph.number_of_edges()} edges")
    return


@app.cell
def _(apartment, polar):
    frame = polar.standard_frame()
    lines = apartment(polar, frame, 1)
    for v, x in sorted(lines.labels.items(), key=lambda kv: sorted(kv[0])):
        print(sorted(v), x.rows)
    return (lines,)


@app.cell
def _(lines, polar, verify_theorem):
    verdict = verify_theorem("thm4.2", polar, xs=lines.members, l=polar.rank, m=1)
    print(verdict.accepted, verdict.clause, verdict.message)
    return


@app.cell(hide_code=True)
def _(mo):
    mo.md(r"""
    ## Sending tops to stars

    The automorphism `g` of PJ(4,1) maps every top to a star. Composing an
    apartment of lines in W(4,2) with it gives an embedding whose tops no
    longer land in tops.
    """)
    return


@app.cell
def _(apartment, build_polar_space, check_clique_images, halfcube_split_and_g):
    w4 = build_polar_space("symplectic", 4, 2)
    f = apartment(w4, w4.standard_frame(), 1).embedding()
    twisted = f.compose(halfcube_split_and_g("+").g)
    report = check_clique_images(twisted)
    print("T1:", report["t1"], "top kinds:", set(report["top_kinds"].values()))
    return f, w4


@app.cell
def _(f, make_rng, perturb, verify_theorem, w4):
    rejections = {}
    for seed in range(20):
        moved = perturb(w4, f.image, make_rng(seed))
        verdict = verify_theorem("thm4.3", w4, xs=moved.members, l=4, m=1)
        rejections[verdict.clause] = rejections.get(verdict.clause, 0) + 1
    rejections
    return


@app.cell
def _(build_polar_space, generated_set, verify_theorem):
    w5 = build_polar_space("symplectic", 5, 2)
    parabolic = generated_set(w5, 2, 1, 4)
    accepted = verify_theorem("thm4.3", w5, embedding=parabolic.embedding(), l=4, m=1)
    print(accepted.message, accepted.certificate.N.rows)
    return


@app.cell
def _(Pattern, search_embeddings, w4):
    report = search_embeddings(w4, Pattern("pj", 3, 0), 1, trials=100, seed=1)
    for finding in report.findings[:10]:
        print(finding.trial, finding.info)
    return


if __name__ == "__main__":
    app.run()
