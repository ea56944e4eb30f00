"""
Cohomology bookkeeping
======================

Each bundled scenario runs the deduction rules that apply to it and
records which rule produced each number.
"""

from __future__ import annotations

import json

from cyarith.hodge_ledger import HodgeDiamond, derive, euler_char, fixture_text

print("quintic threefold chi:", euler_char(HodgeDiamond.cy(h11=1, h21=101)))

for name in ("godeaux", "cvs5", "cvs3", "hirokado"):
    d = derive(json.loads(fixture_text(name + ".json")))
    print(f"\n--- {name}")
    for line in d.lines():
        print(line)

# the special fiber of cvs5 as a diamond
h = derive(json.loads(fixture_text("cvs5.json"))).facts["special_hodge"]
print()
print(HodgeDiamond.cy(h["h11"], h["h21"], h10=h["h10"], h20=h["h20"]).format())
