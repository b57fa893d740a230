#!/usr/bin/env python3
"""Write crates/core/data/templates.tsv."""
import pathlib

# category -> (noun phrase, past verb phrase for "Who ... ?", object verb for "Who did X ... ?")
GENERIC = {
    "AGREE": ("the agreement", "agreed to something", "agree with"),
    "CONSULT": ("the meeting", "held the meeting", "meet with"),
    "SUPPORT": ("the support", "expressed support", "support"),
    "CONCEDE": ("the concession", "made a concession", "concede to"),
    "COOPERATE": ("the cooperation", "cooperated with someone", "cooperate with"),
    "AID": ("the aid", "provided aid", "provide aid to"),
    "RETREAT": ("the retreat", "backed down", "back down before"),
    "REQUEST": ("the request", "made a request", "make a request of"),
    "ACCUSE": ("the accusation", "made an accusation", "accuse"),
    "REJECT": ("the rejection", "rejected something", "reject"),
    "THREATEN": ("the threat", "made a threat", "threaten"),
    "PROTEST": ("the protest", "protested", "protest against"),
    "SANCTION": ("the sanction", "imposed a sanction", "sanction"),
    "MOBILIZE": ("the mobilization", "mobilized forces", "mobilize against"),
    "COERCE": ("the coercive action", "took coercive action", "coerce"),
    "ASSAULT": ("the attack", "carried out the attack", "attack"),
}

SPECIFIC = [
    ("PROTEST", "demo", "ACTOR", 1, "Who held a demonstration?"),
    ("PROTEST", "demo", "RECIP", 1, "Who was the target of the demonstration?"),
    ("PROTEST", "demo", "LOCATION", 1, "Where was the demonstration held?"),
    ("PROTEST", "demo", "DATE", 1, "When was the demonstration held?"),
    ("PROTEST", "demo", "RECIP", 2, "Who was {actor_text}'s demonstration against?"),
    ("PROTEST", "demo", "ACTOR", 3, "Who held a demonstration against {recip_text}?"),
    ("PROTEST", "riot", "ACTOR", 1, "Who engaged in the riot?"),
    ("PROTEST", "riot", "ACTOR", 1, "Who rioted against someone?"),
    ("PROTEST", "riot", "RECIP", 1, "Who was the riot directed against?"),
    ("PROTEST", "riot", "RECIP", 1, "Who was the target of the riot?"),
    ("PROTEST", "riot", "LOCATION", 1, "Where did the riot take place?"),
    ("PROTEST", "riot", "DATE", 1, "When did the riot take place?"),
    ("PROTEST", "riot", "RECIP", 2, "Who did {actor_text} riot against?"),
    ("PROTEST", "riot", "RECIP", 2, "Who was {actor_text}'s riot against?"),
    ("PROTEST", "riot", "RECIP", 2, "Who was attacked by {actor_text}?"),
    ("PROTEST", "riot", "ACTOR", 3, "Who rioted against {recip_text}?"),
    ("PROTEST", "riot", "ACTOR", 3, "Who attacked {recip_text}?"),
    ("PROTEST", "riot", "ACTOR", 3, "Who damaged {recip_text}?"),
    ("CONSULT", "visit", "ACTOR", 1, "Who made the visit?"),
    ("CONSULT", "visit", "RECIP", 1, "Who was visited?"),
    ("CONSULT", "visit", "LOCATION", 1, "Where did the visit take place?"),
    ("CONSULT", "visit", "DATE", 1, "When did the visit take place?"),
    ("CONSULT", "visit", "RECIP", 2, "Who did {actor_text} visit?"),
    ("CONSULT", "visit", "ACTOR", 3, "Who visited {recip_text}?"),
    ("ASSAULT", "explosives", "ACTOR", 1, "Who set off the explosives?"),
    ("ASSAULT", "explosives", "RECIP", 1, "Who was the target of the bombing?"),
    ("ASSAULT", "explosives", "LOCATION", 1, "Where did the bombing take place?"),
    ("ASSAULT", "explosives", "DATE", 1, "When did the bombing take place?"),
    ("ASSAULT", "explosives", "RECIP", 2, "Who did {actor_text} bomb?"),
    ("ASSAULT", "explosives", "ACTOR", 3, "Who bombed {recip_text}?"),
]

rows = []
for cat, (noun, did, obj) in GENERIC.items():
    rows += [
        (cat, "*", "ACTOR", 1, f"Who {did}?"),
        (cat, "*", "RECIP", 1, f"Who was the target of {noun}?"),
        (cat, "*", "LOCATION", 1, f"Where did {noun} take place?"),
        (cat, "*", "DATE", 1, f"When did {noun} take place?"),
        (cat, "*", "RECIP", 2, f"Who did {{actor_text}} {obj}?"),
        (cat, "*", "ACTOR", 3, f"Who did {{recip_text}} face in {noun}?"),
    ]
rows += SPECIFIC
rows += [
    ("*", "*", "ACTOR", 1, "Who carried out the action?"),
    ("*", "*", "RECIP", 1, "Who was the action directed at?"),
    ("*", "*", "LOCATION", 1, "Where did it happen?"),
    ("*", "*", "DATE", 1, "When did it happen?"),
    ("*", "*", "RECIP", 2, "Who did {actor_text} act against?"),
    ("*", "*", "ACTOR", 3, "Who acted against {recip_text}?"),
]

out = pathlib.Path(__file__).resolve().parent.parent / "crates/core/data/templates.tsv"
with out.open("w") as f:
    f.write("# category\tmode\tattribute\tround\tquestion\n")
    f.write("# `*` in category or mode is a wildcard. Round 2 conditions on {actor_text},\n")
    f.write("# round 3 on {recip_text}.\n")
    for r in rows:
        f.write("\t".join(map(str, r)) + "\n")
