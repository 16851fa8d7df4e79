"""
Defeating naive local rules
===========================

A local rule decorates each point from its radius-r view. For three
expansion problems the naive rule fails, and a small explicit pattern
shows it. Each witness replays: rerunning the rule reproduces the conflict.
"""

from cberlab.gallery import (adversary, all_red_ball_rule, coordinate_order_rule, fixed_pattern_rule,
                             replay)

for problem, rule in [("linearization", coordinate_order_rule(2)),
                      ("ramsey", all_red_ball_rule(2)),
                      ("zline", fixed_pattern_rule(2))]:
    res = adversary(problem, rule)
    w = res.witness
    print(f"{problem:13s} {rule.name:16s} {res.status:9s} kind={w.kind:18s} replays={replay(w, rule)}")
    print("    claim:", {k: v for k, v in w.claim.items() if k != "patterns"})
