"""The 15 cosets of an index-15 subgroup of A6 and the GQ(2,2) on them.

Run: python demos/doily_from_a6.py
"""

from cosetlab import catalog_lookup, low_index_subgroups
from cosetlab.geometry import build_geometry, contextual_lines, describe_kinds
from cosetlab.permgroup import image_group, rank

pres = catalog_lookup("a6-demo").presentation
rec = next(r for r in low_index_subgroups(pres, 15) if image_group(r).order() == 360)
P = image_group(rec)
labels = rec.table.rep_labels()
print(f"|P| = {P.order()}, rank {rank(P)}")

geom = build_geometry(P)
for k in describe_kinds(geom):
    print(f"kind {k['kind']}: {k['lines']} lines of {k['line_size']}, stabilizer order {k['stabilizer_order']}, {k['name']}")

gq = geom.principal()
ctx = {ln.points for ln in contextual_lines(gq, rec.table)}
for ln in gq.lines:
    mark = "  (contextual)" if ln.points in ctx else ""
    print("  {" + ", ".join(labels[p] for p in ln.points) + "}" + mark)
print(f"{len(ctx)} of {len(gq.lines)} lines are contextual")
