#!/usr/bin/env python3
"""Regenerate motion_lexicon.json and the shift_workspace/ workspace.

Run from the fixtures directory: python3 gen_workspace.py
"""

import json
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

HERE = Path(__file__).resolve().parent
DOC = "hobbit-ch06"
DATE = "08/12/2014"


def fe(name, coreness="core", semantic_type=None, excludes=()):
    out = {"name": name, "coreness": coreness}
    if semantic_type:
        out["semantic_type"] = semantic_type
    out["excludes"] = sorted(excludes)
    return out


FRAMES = [
    {
        "name": "Motion",
        "definition": "Some entity (Theme) starts out in one place (Source) and ends up in some other place (Goal), having covered some space between the two (Path).",
        "frame_elements": [
            fe("Theme", semantic_type="Physical_object"),
            fe("Source", semantic_type="Source"),
            fe("Path"),
            fe("Goal", semantic_type="Goal"),
            fe("Manner", "peripheral"),
        ],
    },
    {
        "name": "Self_motion",
        "definition": "The Self_mover, a living being, moves under its own direction along a Path.",
        "frame_elements": [
            fe("Self_mover", semantic_type="Sentient"),
            fe("Path"),
            fe("Source", "peripheral", semantic_type="Source"),
            fe("Goal", "peripheral", semantic_type="Goal"),
            fe("Manner", "peripheral"),
            fe("Time", "extra_thematic"),
        ],
    },
    {
        "name": "Motion_directional",
        "definition": "In this frame a Theme moves in a certain Direction which is often determined by gravity or other natural, physical forces. The Theme is not necessarily a self-mover.",
        "frame_elements": [
            fe("Area"),
            fe("Direction", excludes=["Area"]),
            fe("Goal", semantic_type="Goal", excludes=["Area"]),
            fe("Source", semantic_type="Source", excludes=["Area"]),
            fe("Path", excludes=["Area"]),
            fe("Theme", semantic_type="Physical_object"),
        ],
    },
    {
        "name": "Arriving",
        "definition": "An object Theme moves in the direction of a Goal.",
        "frame_elements": [
            fe("Theme", semantic_type="Physical_object"),
            fe("Goal", semantic_type="Goal"),
            fe("Source", "peripheral", semantic_type="Source"),
            fe("Path", "peripheral"),
        ],
    },
    {
        "name": "Manipulation",
        "definition": "An Agent manipulates an Entity with a body part.",
        "frame_elements": [
            fe("Agent", semantic_type="Sentient"),
            fe("Entity", semantic_type="Physical_object"),
            fe("Locus", "peripheral"),
        ],
    },
    {
        "name": "Cause_motion",
        "definition": "An Agent causes a Theme to move along a Path to a Goal.",
        "frame_elements": [
            fe("Agent", semantic_type="Sentient"),
            fe("Theme", semantic_type="Physical_object"),
            fe("Goal", semantic_type="Goal"),
            fe("Path", "peripheral"),
        ],
    },
    {
        "name": "Cause_to_move_in_place",
        "definition": "An Agent causes a Theme to move with respect to a fixed point without leaving that place.",
        "frame_elements": [
            fe("Agent", semantic_type="Sentient"),
            fe("Theme", semantic_type="Physical_object"),
            fe("Fixed_location", "peripheral"),
        ],
    },
    {
        "name": "Fleeing",
        "definition": "A Self_mover leaves a Source because of some danger.",
        "frame_elements": [
            fe("Self_mover", semantic_type="Sentient"),
            fe("Source", semantic_type="Source"),
            fe("Path", "peripheral"),
        ],
    },
    {
        "name": "Dispersal",
        "definition": "Individuals move away from one another to occupy a larger Goal_area.",
        "frame_elements": [
            fe("Individuals", semantic_type="Physical_object"),
            fe("Goal_area", "peripheral", semantic_type="Goal"),
        ],
    },
    {
        "name": "Sidereal_appearance",
        "definition": "An Astronomical_entity comes into view above the horizon.",
        "frame_elements": [
            fe("Astronomical_entity", semantic_type="Physical_object"),
            fe("Lookout_point", "peripheral"),
        ],
    },
]

SEMANTIC_TYPES = [
    {"name": "Physical_object"},
    {"name": "Sentient", "parent": "Physical_object"},
    {"name": "Source"},
    {"name": "Goal"},
]

RELATIONS = [
    ("inherits_from", "Self_motion", "Motion"),
    ("inherits_from", "Motion_directional", "Motion"),
    ("inherits_from", "Arriving", "Motion"),
    ("inherits_from", "Fleeing", "Self_motion"),
    ("causative_of", "Cause_motion", "Motion"),
    ("uses", "Cause_to_move_in_place", "Manipulation"),
    ("uses", "Dispersal", "Motion"),
    ("uses", "Sidereal_appearance", "Motion_directional"),
]

SELF_MOTION_EN = [
    "walk", "climb", "crawl", "march", "hurry", "scramble", "jump", "wander",
    "step", "trudge", "tramp", "stumble", "stroll", "tiptoe", "dash", "rush",
    "hop", "stagger", "plod", "limp",
]
SELF_MOTION_AR = [
    "مَشَى", "تَسَلَّقَ", "زَحَفَ", "رَكَضَ", "سَارَ", "قَفَزَ", "هَرَعَ", "تَقَدَّمَ",
    "خَطَا", "تَجَوَّلَ",
]
MOTION_DIRECTIONAL_EN = [
    "angle", "descend", "dip", "drop", "fall", "plunge", "plummet", "rise",
    "slant", "topple",
]
MOTION_DIRECTIONAL_AR = [
    ("تَصَاعَدَ", "v"), ("تَدَحْرَجَ", "v"), ("تَدَحْرُج", "n"), ("تَدَاعَى", "v"),
    ("اِنْهَارَ", "v"), ("اِنْخَفَضَ", "v"), ("اِنْحَنَى", "v"), ("اِنْحَرَفَ", "v"),
    ("اِنْحَدَرَ", "v"), ("تَعَالَى", "v"), ("سَقَطَ", "v"), ("مَالَ", "v"),
    ("نَزَلَ", "v"), ("هَبَطَ", "v"), ("صُعُود", "n"), ("وَقَعَ", "v"),
]

LEXICAL_UNITS = (
    [(l, "v", "EN", "Self_motion") for l in SELF_MOTION_EN]
    + [(l, "v", "AR", "Self_motion") for l in SELF_MOTION_AR]
    + [(l, "v", "EN", "Motion_directional") for l in MOTION_DIRECTIONAL_EN]
    + [(l, p, "AR", "Motion_directional") for l, p in MOTION_DIRECTIONAL_AR]
    + [
        ("roll", "v", "EN", "Motion"),
        ("drift", "v", "EN", "Motion"),
        ("glide", "v", "EN", "Motion"),
        ("اِنْزَلَقَ", "v", "AR", "Self_motion"),
        ("عَادَ", "v", "AR", "Arriving"),
        ("اِقْتَرَبَ", "v", "AR", "Arriving"),
        ("arrive", "v", "EN", "Arriving"),
        ("تَعَلَّقَ", "v", "AR", "Manipulation"),
        ("grasp", "v", "EN", "Manipulation"),
        ("أَوْقَعَ", "v", "AR", "Cause_motion"),
        ("throw", "v", "EN", "Cause_motion"),
        ("swing", "v", "EN", "Cause_to_move_in_place"),
        ("flee", "v", "EN", "Fleeing"),
        ("هَرَبَ", "v", "AR", "Fleeing"),
        ("scatter", "v", "EN", "Dispersal"),
        ("تَفَرَّقَ", "v", "AR", "Self_motion"),
        ("marcher", "v", "FR", "Self_motion"),
        ("descendre", "v", "FR", "Motion_directional"),
    ]
)


def lexicon():
    return {
        "semantic_types": SEMANTIC_TYPES,
        "frames": FRAMES,
        "relations": [{"kind": k, "source": s, "target": t} for k, s, t in RELATIONS],
        "lexical_units": [
            {"lemma": l, "pos": p, "language": lang, "frame": f}
            for l, p, lang, f in LEXICAL_UNITS
        ],
    }


def past(verb):
    irregular = {"fall": "fell", "flee": "fled", "swing": "swung", "rise": "rose"}
    if verb in irregular:
        return irregular[verb]
    if verb.endswith("e"):
        return verb + "d"
    if verb.endswith("y") and verb[-2] not in "aeiou":
        return verb[:-1] + "ied"
    if verb in ("step", "hop", "drop", "dip", "plod"):
        return verb + verb[-1] + "ed"
    return verb + "ed"


# (source frame, target frame, count, English lemmas, Arabic lemmas), in the
# row order of the reference table.
ROWS = [
    ("Self_motion", "Self_motion", 56, SELF_MOTION_EN, SELF_MOTION_AR),
    ("Self_motion", "Motion_directional", 1, ["step"], ["نَزَلَ"]),
    ("Self_motion", "Arriving", 2, ["march", "crawl"], ["عَادَ", "اِقْتَرَبَ"]),
    ("Self_motion", "Manipulation", 1, ["climb"], ["تَعَلَّقَ"]),
    ("Motion", "Motion_directional", 2, ["roll"], ["تَدَحْرَجَ"]),
    ("Motion", "Self_motion", 2, ["drift", "glide"], ["اِنْزَلَقَ"]),
    ("Motion_directional", "Motion_directional", 4, ["drop", "plunge", "topple", "descend"], ["سَقَطَ", "وَقَعَ"]),
    ("Motion_directional", "Cause_motion", 1, ["plummet"], ["أَوْقَعَ"]),
    ("Cause_to_move_in_place", "Manipulation", 1, ["swing"], ["تَعَلَّقَ"]),
    ("Fleeing", "Fleeing", 1, ["flee"], ["هَرَبَ"]),
    ("Dispersal", "Self_motion", 1, ["scatter"], ["تَفَرَّقَ"]),
]

SUBJECTS = [
    ("The dwarves", "الأقزام"),
    ("Bilbo", "بلبو"),
    ("The goblins", "العفاريت"),
    ("Thorin", "ثورين"),
    ("The wolves", "الذئاب"),
    ("Gandalf", "غاندالف"),
    ("The ponies", "المهور"),
    ("The hobbit", "الهوبيت"),
]
PHRASES = [
    ("down the slope", "على المنحدر"),
    ("into the trees", "بين الأشجار"),
    ("over the stones", "فوق الحجارة"),
    ("across the glade", "عبر الفسحة"),
    ("up the hill", "إلى أعلى التل"),
    ("along the path", "على الطريق"),
]

# frame -> (mover FE, second FE, EN GF and PT of the second FE, AR GF and PT)
ROLES = {
    "Self_motion": ("Self_mover", "Path", ("Dep", "PP"), ("POBJ", "PP")),
    "Motion": ("Theme", "Path", ("Dep", "PP"), ("POBJ", "PP")),
    "Motion_directional": ("Theme", "Path", ("Dep", "PP"), ("POBJ", "PP")),
    "Arriving": ("Theme", "Goal", ("Dep", "PP"), ("POBJ", "PP")),
    "Manipulation": ("Agent", "Entity", ("Dep", "PP"), ("POBJ", "PP")),
    "Cause_motion": ("Agent", "Theme", ("Obj", "NP"), ("OBJ", "NP-acc")),
    "Cause_to_move_in_place": ("Agent", "Theme", ("Obj", "NP"), ("OBJ", "NP-acc")),
    "Fleeing": ("Self_mover", "Source", ("Dep", "PP"), ("POBJ", "PP")),
    "Dispersal": ("Individuals", "Goal_area", ("Dep", "PP"), ("POBJ", "PP")),
}
ITYPES = {"Source": "CNI", "Goal": "DNI"}
SUBJECT_GF = {"EN": ("Ext", "NP"), "AR": ("SBJ", "NP-nom")}


def frame_def(name):
    return next(f for f in FRAMES if f["name"] == name)


def null_marks(frame, realized):
    """Core FEs neither realized nor excluded by a realized one."""
    out = []
    for el in frame["frame_elements"]:
        if el["coreness"] != "core" or el["name"] in realized:
            continue
        excused = any(
            el["name"] in r["excludes"] or r["name"] in el["excludes"]
            for r in frame["frame_elements"]
            if r["name"] in realized
        )
        if not excused:
            out.append((el["name"], ITYPES.get(el["name"], "INI")))
    return out


def build_sentence(lang, subject, verb, phrase):
    """Words in order with their role; returns text and code-point spans."""
    parts = [("subject", subject), ("target", verb), ("second", phrase)]
    if lang == "AR":
        parts = [parts[1], parts[0], parts[2]]
    text, spans, pos = "", {}, 0
    for i, (role, words) in enumerate(parts):
        if i:
            text += " "
            pos += 1
        spans[role] = (pos, pos + len(words) - 1)
        text += words
        pos += len(words)
    if lang == "EN":
        text += "."
    return text, spans


def label(name, start=None, end=None, itype=None, cby=None):
    attrs = [("name", name)]
    if itype is None:
        attrs += [("start", str(start)), ("end", str(end))]
    else:
        attrs.append(("itype", itype))
    if cby:
        attrs.append(("cBy", cby))
    return "<label" + "".join(f" {k}={quoteattr(v)}" for k, v in attrs) + "/>"


def annotation_set(set_id, frame_name, lu, lang, spans):
    frame = frame_def(frame_name)
    mover, second, en_gf, ar_gf = ROLES[frame_name]
    gf2 = en_gf if lang == "EN" else ar_gf
    gf1 = SUBJECT_GF[lang]
    fe_labels = [
        label(mover, *spans["subject"], cby="MANUAL"),
        label(second, *spans["second"], cby="MANUAL"),
    ]
    fe_labels += [label(n, itype=t, cby="MANUAL") for n, t in null_marks(frame, {mover, second})]
    layers = [
        ("FE", fe_labels),
        ("GF", [label(gf1[0], *spans["subject"]), label(gf2[0], *spans["second"])]),
        ("PT", [label(gf1[1], *spans["subject"]), label(gf2[1], *spans["second"])]),
        ("Target", [label("Target", *spans["target"], cby="MANUAL")]),
    ]
    lines = [
        f'    <annotationSet ID="{set_id}" status="MANUAL" cDate="{DATE}" '
        f"frameName={quoteattr(frame_name)} luName={quoteattr(lu)}>"
    ]
    for name, labels in layers:
        lines.append(f'      <layer name="{name}" rank="1">')
        lines += ["        " + l for l in labels]
        lines.append("      </layer>")
    lines.append("    </annotationSet>")
    return lines


def workspace(root):
    for sub in ("documents", "annotations", "pairings", "tokens"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    corpus = ['<?xml version="1.0" encoding="UTF-8"?>', '<corpus novel="hobbit" chapter="6">']
    sentences = {}
    n, sentence_id, set_id = 0, 1, 1001
    for src_frame, tgt_frame, count, en_lemmas, ar_lemmas in ROWS:
        for k in range(count):
            n += 1
            en_subject, ar_subject = SUBJECTS[n % len(SUBJECTS)]
            en_phrase, ar_phrase = PHRASES[n % len(PHRASES)]
            en_lemma = en_lemmas[k % len(en_lemmas)]
            ar_lemma = ar_lemmas[k % len(ar_lemmas)]
            en_text, en_spans = build_sentence("EN", en_subject, past(en_lemma), en_phrase)
            ar_text, ar_spans = build_sentence("AR", ar_subject, ar_lemma, ar_phrase)
            ar_id, en_id = sentence_id, sentence_id + 1
            sentence_id += 2
            corpus.append(f'  <prg pID="p{n}">')
            corpus.append(f'    <p lang="AR" ID="{ar_id}">{escape(ar_text)}</p>')
            corpus.append(f'    <p lang="EN" ID="{en_id}">{escape(en_text)}</p>')
            corpus.append("  </prg>")
            sentences[ar_id] = annotation_set(set_id, tgt_frame, f"{ar_lemma}.v", "AR", ar_spans)
            sentences[en_id] = annotation_set(set_id + 1, src_frame, f"{en_lemma}.v", "EN", en_spans)
            set_id += 2
    corpus.append("</corpus>")
    assert n == 72

    ann = ['<?xml version="1.0" encoding="UTF-8"?>', "<annotations>"]
    for sid in sorted(sentences):
        ann.append(f'  <sentence ID="{sid}">')
        ann += sentences[sid]
        ann.append("  </sentence>")
    ann.append("</annotations>")

    (root / "documents" / f"{DOC}.xml").write_text("\n".join(corpus) + "\n", encoding="utf-8")
    (root / "annotations" / f"{DOC}.xml").write_text("\n".join(ann) + "\n", encoding="utf-8")
    (root / "pairings" / f"{DOC}.json").write_text('{\n  "pairs": []\n}\n', encoding="utf-8")
    (root / "lexicon.json").write_text(dump(lexicon()), encoding="utf-8")
    (root / "state.json").write_text(
        dump({"next_sentence_id": sentence_id, "next_set_id": set_id}), encoding="utf-8"
    )
    (root / "framealign.toml").write_text(
        'languages = ["AR", "EN", "FR"]\n'
        "strict = false\n"
        "relatedness_threshold = 2\n"
        "\n[server]\n"
        'bind = "127.0.0.1"\n'
        "port = 8080\n",
        encoding="utf-8",
    )


def dump(value):
    return json.dumps(value, ensure_ascii=False, indent=2) + "\n"


if __name__ == "__main__":
    (HERE / "motion_lexicon.json").write_text(dump(lexicon()), encoding="utf-8")
    workspace(HERE / "shift_workspace")
