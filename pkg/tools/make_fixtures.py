#!/usr/bin/env python3
"""Regenerate the committed test fixtures.

Writes, under tests/fixtures/:

* ``categories.json``            small category index (things and stuff)
* ``wordnet/``                   hand-built micro word database (WNDB layout)
* ``transfer/``                  ten synthetic panoptic images + narratives
  exercising every grounding path (direct hit, vicinity, void centre,
  plural expansion, meronym, manual override, dropped phrases)
* ``oracle/``                    disjoint-rectangle ground truth plus
  half-area proposals whose best IoU is exactly 0.5 everywhere
* ``captions.txt``               a small caption corpus for chunker checks

With ``--golden`` it additionally re-runs the grounding pipeline over the
transfer set and freezes the output as ``transfer/golden_grounded.jsonl``
and ``transfer/golden_diagnostics.log``.  Inspect diffs carefully before
committing regenerated goldens: they are the expected values the test
suite enforces.

Everything here is deterministic; running it twice produces identical
bytes.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np
from PIL import Image

from tracelink.panoptic import encode_id_raster

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"


# ----------------------------------------------------------------------
# categories

CATEGORIES = [
    {"id": 1, "name": "person", "isthing": 1},
    {"id": 3, "name": "car", "isthing": 1},
    {"id": 6, "name": "bus", "isthing": 1},
    {"id": 18, "name": "dog", "isthing": 1},
    {"id": 21, "name": "cat", "isthing": 1},
    {"id": 178, "name": "water-other", "isthing": 0},
    {"id": 181, "name": "window-other", "isthing": 0},
    {"id": 184, "name": "tree-merged", "isthing": 0},
    {"id": 187, "name": "sky-other-merged", "isthing": 0},
    {"id": 193, "name": "grass-merged", "isthing": 0},
    {"id": 197, "name": "building-other-merged", "isthing": 0},
]


# ----------------------------------------------------------------------
# micro word database (classic WNDB plain-text layout)

WN_DATA = """\
  1 Synthetic micro word database for the test suite.
  2 Layout follows the classic WNDB plain text format.
00000001 03 n 01 entity 0 001 ~ 00000002 n 0000 | that which exists
00000002 03 n 02 physical_object 0 object 0 008 @ 00000001 n 0000 ~ 00000003 n 0000 ~ 00000006 n 0000 ~ 00000012 n 0000 ~ 00000016 n 0000 ~ 00000017 n 0000 ~ 00000018 n 0000 = 00000001 a 0000 | a tangible thing
00000003 06 n 01 vehicle 0 003 @ 00000002 n 0000 ~ 00000004 n 0000 ~ 00000005 n 0000 | a conveyance that transports people or objects
00000004 06 n 03 car 0 auto 0 automobile 0 001 @ 00000003 n 0000 | a motor vehicle with four wheels
00000005 06 n 02 bus 0 autobus 0 001 @ 00000003 n 0000 | a vehicle carrying many passengers
00000006 03 n 01 living_thing 0 004 @ 00000002 n 0000 ~ 00000007 n 0000 ~ 00000010 n 0000 ~ 00000014 n 0000 | a living organism
00000007 05 n 02 animal 0 creature 0 003 @ 00000006 n 0000 ~ 00000008 n 0000 ~ 00000009 n 0000 | a living organism that feeds on organic matter
00000008 05 n 02 dog 0 domestic_dog 0 001 @ 00000007 n 0000 | a domesticated carnivorous mammal
00000009 05 n 02 cat 0 true_cat 0 001 @ 00000007 n 0000 | a small domesticated carnivorous mammal
00000010 18 n 03 person 0 individual 0 human 0 003 @ 00000006 n 0000 ~ 00000011 n 0000 ~ 00000020 n 0000 | a human being
00000011 18 n 02 woman 0 adult_female 0 001 @ 00000010 n 0000 | an adult female person
00000012 17 n 01 sky 0 001 @ 00000002 n 0000 | the atmosphere seen from the earth
00000013 20 n 01 tree 0 001 @ 00000014 n 0000 | a tall perennial woody plant
00000014 20 n 02 plant 0 flora 0 003 @ 00000006 n 0000 ~ 00000013 n 0000 ~ 00000015 n 0000 | a living organism lacking locomotion
00000015 20 n 01 grass 0 001 @ 00000014 n 0000 | narrow-leaved green herbage
00000016 06 n 02 building 0 edifice 0 002 @ 00000002 n 0000 %p 00000017 n 0000 | a structure with a roof and walls
00000017 06 n 01 window 0 002 @ 00000002 n 0000 #p 00000016 n 0000 | an opening in a wall to admit light
00000018 27 n 02 water 0 h2o 0 001 @ 00000002 n 0000 | a clear colorless liquid
00000019 18 n 01 cat 1 001 @ 00000010 n 0000 | an informal term for a person
00000020 18 n 02 man 0 adult_male 0 001 @ 00000010 n 0000 | an adult male person
"""

WN_INDEX = """\
  1 Synthetic micro word database for the test suite.
  2 Layout follows the classic WNDB plain text format.
adult_female n 1 1 @ 1 0 00000011
adult_male n 1 1 @ 1 0 00000020
animal n 1 2 @ ~ 1 0 00000007
auto n 1 1 @ 1 0 00000004
autobus n 1 1 @ 1 0 00000005
automobile n 1 1 @ 1 0 00000004
building n 1 2 @ %p 1 0 00000016
bus n 1 1 @ 1 0 00000005
car n 1 1 @ 1 0 00000004
cat n 2 2 @ ~ 2 1 00000009 00000019
creature n 1 2 @ ~ 1 0 00000007
dog n 1 1 @ 1 0 00000008
domestic_dog n 1 1 @ 1 0 00000008
edifice n 1 2 @ %p 1 0 00000016
entity n 1 1 ~ 1 0 00000001
flora n 1 2 @ ~ 1 0 00000014
grass n 1 1 @ 1 0 00000015
h2o n 1 1 @ 1 0 00000018
human n 1 2 @ ~ 1 0 00000010
individual n 1 2 @ ~ 1 0 00000010
living_thing n 1 2 @ ~ 1 0 00000006
man n 1 1 @ 1 0 00000020
object n 1 2 @ ~ 1 0 00000002
person n 1 2 @ ~ 1 0 00000010
physical_object n 1 2 @ ~ 1 0 00000002
plant n 1 2 @ ~ 1 0 00000014
sky n 1 1 @ 1 0 00000012
tree n 1 1 @ 1 0 00000013
true_cat n 1 1 @ 1 0 00000009
vehicle n 1 2 @ ~ 1 0 00000003
water n 1 1 @ 1 0 00000018
window n 1 2 @ #p 1 0 00000017
woman n 1 1 @ 1 0 00000011
"""


# ----------------------------------------------------------------------
# helpers


def paint(width: int, height: int, rects: list[tuple[int, int, int, int, int]]) -> np.ndarray:
    """Fill rectangles (segment_id, x0, y0, x1, y1) inclusive into a raster."""
    raster = np.zeros((height, width), dtype=np.int32)
    for sid, x0, y0, x1, y1 in rects:
        raster[y0 : y1 + 1, x0 : x1 + 1] = sid
    return raster


def annotation_for(image_id: int, raster: np.ndarray, category_of: dict[int, int]) -> dict:
    """Build a segments_info record from a painted raster."""
    infos = []
    for sid in sorted(int(v) for v in np.unique(raster) if v != 0):
        ys, xs = np.nonzero(raster == sid)
        infos.append(
            {
                "id": sid,
                "category_id": category_of[sid],
                "area": int(len(xs)),
                "bbox": [
                    int(xs.min()),
                    int(ys.min()),
                    int(xs.max() - xs.min() + 1),
                    int(ys.max() - ys.min() + 1),
                ],
            }
        )
    return {
        "image_id": image_id,
        "file_name": f"{image_id:012d}.png",
        "segments_info": infos,
    }


def save_raster(path: Path, raster: np.ndarray) -> None:
    Image.fromarray(encode_id_raster(raster)).save(path)


def words_to_timed(words: list[str], step: float = 0.5, start: float = 0.0) -> list[dict]:
    """One utterance per word, consecutive windows of ``step`` seconds."""
    out = []
    t = start
    for word in words:
        out.append(
            {"utterance": word, "start_time": round(t, 3), "end_time": round(t + step, 3)}
        )
        t += step
    return out


# ----------------------------------------------------------------------
# the transfer scenario set


def build_transfer(out_dir: Path) -> None:
    rasters_dir = out_dir / "rasters"
    rasters_dir.mkdir(parents=True, exist_ok=True)

    images: dict[int, tuple[np.ndarray, dict[int, int]]] = {}

    # 101: full-cover sky over grass; both phrases hit their region directly.
    images[101] = (
        paint(32, 32, [(101001, 0, 0, 31, 15), (101002, 0, 16, 31, 31)]),
        {101001: 187, 101002: 193},
    )
    # 102: tree left, car right, void gap; phrase traced over the tree but
    # naming a vehicle, must travel to the car through the vicinity rank.
    images[102] = (
        paint(32, 32, [(102001, 0, 0, 13, 31), (102002, 18, 0, 31, 31)]),
        {102001: 184, 102002: 3},
    )
    # 103: centre of mass on void; nearest region (tree) does not agree,
    # the farther car does.
    images[103] = (
        paint(32, 32, [(103001, 24, 12, 31, 19), (103002, 0, 0, 5, 31)]),
        {103001: 3, 103002: 184},
    )
    # 104: three dogs and a cat; plural picks up the two dogs inside the
    # trace box, the third dog stays outside.
    images[104] = (
        paint(
            32,
            32,
            [
                (104001, 2, 20, 7, 25),
                (104002, 12, 20, 17, 25),
                (104003, 24, 20, 29, 25),
                (104010, 12, 4, 17, 9),
            ],
        ),
        {104001: 18, 104002: 18, 104003: 18, 104010: 21},
    )
    # 105: non-square image; one phrase has no trace points at all.
    images[105] = (
        paint(48, 24, [(105001, 6, 8, 17, 15), (105002, 30, 0, 41, 23)]),
        {105001: 18, 105002: 184},
    )
    # 106: a word no source can match; phrase and whole narrative drops.
    images[106] = (
        paint(32, 32, [(106002, 0, 0, 31, 15), (106001, 0, 16, 31, 31)]),
        {106001: 178, 106002: 187},
    )
    # 107: hierarchy (woman) and manual override (shirt) both land on person.
    images[107] = (
        paint(32, 32, [(107001, 10, 6, 21, 25), (107002, 0, 0, 7, 31)]),
        {107001: 1, 107002: 197},
    )
    # 108: plural whose seed sits outside the trace box (seed is exempt).
    images[108] = (
        paint(
            32,
            32,
            [(108001, 0, 12, 7, 19), (108002, 12, 13, 17, 18), (108003, 22, 13, 27, 18)],
        ),
        {108001: 6, 108002: 6, 108003: 6},
    )
    # 109: part-of agreement; windows ground onto the building.
    images[109] = (
        paint(32, 32, [(109002, 0, 0, 31, 5), (109001, 4, 8, 27, 27)]),
        {109001: 197, 109002: 187},
    )
    # 110: two narratives about the same image, sharing the dog region.
    images[110] = (
        paint(32, 32, [(110001, 8, 8, 15, 15), (110002, 20, 8, 27, 15)]),
        {110001: 18, 110002: 1},
    )

    annotations = []
    for image_id in sorted(images):
        raster, category_of = images[image_id]
        record = annotation_for(image_id, raster, category_of)
        annotations.append(record)
        save_raster(rasters_dir / record["file_name"], raster)

    with open(out_dir / "panoptic.json", "w", encoding="utf-8") as fh:
        json.dump({"annotations": annotations}, fh, indent=2)
        fh.write("\n")

    # narratives ------------------------------------------------------
    narratives = []

    def add(nid, image_id, caption, timed, traces):
        narratives.append(
            {
                "narrative_id": nid,
                "image_id": image_id,
                "caption": caption,
                "timed_caption": timed,
                "traces": traces,
            }
        )

    def pts(*triples):
        return [{"x": x, "y": y, "t": t} for x, y, t in triples]

    # 101: multi-word utterances; the loader splits them per word.
    add(
        "n101",
        101,
        "the sky above the grass",
        [
            {"utterance": "the sky", "start_time": 0.0, "end_time": 1.0},
            {"utterance": "above", "start_time": 1.0, "end_time": 1.5},
            {"utterance": "the grass", "start_time": 1.5, "end_time": 2.5},
        ],
        [
            pts((0.5, 0.25, 0.6), (0.5, 0.25, 0.7), (0.5, 0.25, 0.8)),
            pts((0.5, 0.75, 2.1), (0.5, 0.75, 2.2)),
        ],
    )
    add(
        "n102",
        102,
        "a red vehicle parked there",
        words_to_timed(["a", "red", "vehicle", "parked", "there"], 0.4),
        [pts((0.2, 0.5, 0.5), (0.2, 0.5, 0.7), (0.2, 0.5, 0.9))],
    )
    add(
        "n103",
        103,
        "there is a vehicle here",
        [
            {"utterance": "there", "start_time": 0.0, "end_time": 0.3},
            {"utterance": "is", "start_time": 0.3, "end_time": 0.6},
            {"utterance": "a", "start_time": 0.6, "end_time": 0.9},
            {"utterance": "vehicle", "start_time": 0.9, "end_time": 1.3},
            {"utterance": "here", "start_time": 1.3, "end_time": 1.6},
        ],
        [pts((0.4, 0.5, 1.0), (0.4, 0.5, 1.1))],
    )
    add(
        "n104",
        104,
        "two dogs and a cat",
        [
            {"utterance": "two", "start_time": 0.0, "end_time": 0.4},
            {"utterance": "dogs", "start_time": 0.4, "end_time": 0.9},
            {"utterance": "and", "start_time": 0.9, "end_time": 1.2},
            {"utterance": "a", "start_time": 1.2, "end_time": 1.5},
            {"utterance": "cat", "start_time": 1.5, "end_time": 2.0},
        ],
        [
            pts(
                (0.05, 0.60, 0.10),
                (0.10, 0.70, 0.20),
                (0.45, 0.68, 0.30),
                (0.48, 0.66, 0.40),
                (0.56, 0.82, 0.50),
                (0.50, 0.70, 0.60),
                (0.52, 0.70, 0.70),
            ),
            pts((0.45, 0.20, 1.7)),
        ],
    )
    add(
        "n105",
        105,
        "a dog beside a tree",
        [
            {"utterance": "a", "start_time": 0.0, "end_time": 0.3},
            {"utterance": "dog", "start_time": 0.3, "end_time": 0.7},
            {"utterance": "beside", "start_time": 0.7, "end_time": 1.0},
            {"utterance": "a", "start_time": 1.0, "end_time": 1.3},
            {"utterance": "tree", "start_time": 1.3, "end_time": 1.7},
        ],
        [pts((0.75, 0.5, 1.5))],
    )
    add(
        "n106",
        106,
        "a computer on the water",
        [
            {"utterance": "a", "start_time": 0.0, "end_time": 0.3},
            {"utterance": "computer", "start_time": 0.3, "end_time": 0.8},
            {"utterance": "on", "start_time": 0.8, "end_time": 1.1},
            {"utterance": "the", "start_time": 1.1, "end_time": 1.4},
            {"utterance": "water", "start_time": 1.4, "end_time": 1.8},
        ],
        [pts((0.5, 0.75, 0.5), (0.5, 0.8, 1.6))],
    )
    add(
        "n106b",
        106,
        "the computer",
        words_to_timed(["the", "computer"], 0.45),
        [pts((0.5, 0.25, 0.6))],
    )
    add(
        "n107",
        107,
        "a woman wearing a shirt",
        [
            {"utterance": "a", "start_time": 0.0, "end_time": 0.3},
            {"utterance": "woman", "start_time": 0.3, "end_time": 0.7},
            {"utterance": "wearing", "start_time": 0.7, "end_time": 1.0},
            {"utterance": "a", "start_time": 1.0, "end_time": 1.3},
            {"utterance": "shirt", "start_time": 1.3, "end_time": 1.7},
        ],
        [pts((0.5, 0.5, 0.5), (0.5, 0.4, 1.5))],
    )
    bus_hover = [
        (0.10, 0.50),
        (0.12, 0.47),
        (0.11, 0.52),
        (0.10, 0.50),
    ] * 4
    bus_sweep = [(0.36, 0.40), (0.55, 0.59), (0.68, 0.40), (0.87, 0.58)]
    bus_points = [
        (x, y, round(0.41 + 0.02 * i, 3))
        for i, (x, y) in enumerate(bus_hover + bus_sweep)
    ]
    add(
        "n108",
        108,
        "the buses",
        [
            {"utterance": "the", "start_time": 0.0, "end_time": 0.4},
            {"utterance": "buses", "start_time": 0.4, "end_time": 1.0},
        ],
        [pts(*bus_points)],
    )
    add(
        "n109",
        109,
        "the windows of it",
        [
            {"utterance": "the", "start_time": 0.0, "end_time": 0.3},
            {"utterance": "windows", "start_time": 0.3, "end_time": 0.8},
            {"utterance": "of", "start_time": 0.8, "end_time": 1.1},
            {"utterance": "it", "start_time": 1.1, "end_time": 1.4},
        ],
        [pts((0.5, 0.55, 0.5))],
    )
    add(
        "n110a",
        110,
        "a dog with a man",
        [
            {"utterance": "a", "start_time": 0.0, "end_time": 0.3},
            {"utterance": "dog", "start_time": 0.3, "end_time": 0.7},
            {"utterance": "with", "start_time": 0.7, "end_time": 1.0},
            {"utterance": "a", "start_time": 1.0, "end_time": 1.3},
            {"utterance": "man", "start_time": 1.3, "end_time": 1.7},
        ],
        [pts((0.38, 0.38, 0.5), (0.75, 0.38, 1.5))],
    )
    add(
        "n110b",
        110,
        "the dog again",
        [
            {"utterance": "the", "start_time": 0.0, "end_time": 0.4},
            {"utterance": "dog", "start_time": 0.4, "end_time": 0.9},
            {"utterance": "again", "start_time": 0.9, "end_time": 1.2},
        ],
        [pts((0.4, 0.4, 0.6))],
    )
    # references an image the annotation file does not know
    add(
        "n999",
        999,
        "a dog",
        words_to_timed(["a", "dog"], 0.5),
        [pts((0.5, 0.5, 0.7))],
    )

    with open(out_dir / "narratives.jsonl", "w", encoding="utf-8") as fh:
        for record in narratives:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


# ----------------------------------------------------------------------
# the oracle scenario set: every phrase's best proposal IoU is exactly 1/2


def build_oracle(out_dir: Path) -> None:
    gt_dir = out_dir / "gt_rasters"
    prop_dir = out_dir / "proposal_rasters"
    gt_dir.mkdir(parents=True, exist_ok=True)
    prop_dir.mkdir(parents=True, exist_ok=True)

    # four 8x8 regions per image; r1/r2 share a category so a plural
    # phrase can span them
    corners = [(2, 2), (20, 2), (2, 20), (20, 20)]
    region_cats = [3, 3, 18, 193]  # car, car, dog, grass-merged

    gt_annotations = []
    prop_annotations = []
    grounded = []

    for image_id in range(201, 206):
        gt = np.zeros((32, 32), dtype=np.int32)
        prop = np.zeros((32, 32), dtype=np.int32)
        region_ids = []
        for k, (cx, cy) in enumerate(corners):
            sid = image_id * 1000 + k + 1
            region_ids.append(sid)
            gt[cy : cy + 8, cx : cx + 8] = sid
            # proposal: top half of the region, exactly half the pixels
            prop[cy : cy + 4, cx : cx + 8] = image_id * 1000 + 901 + k
        # fifth proposal: bottom halves of r1 and r2 together -- half the
        # pixels of their union, overlapping neither top-half proposal
        prop[6:10, 2:10] = image_id * 1000 + 905
        prop[6:10, 20:28] = image_id * 1000 + 905

        gt_record = annotation_for(
            image_id, gt, {sid: cat for sid, cat in zip(region_ids, region_cats)}
        )
        prop_record = annotation_for(
            image_id, prop, {int(v): 3 for v in np.unique(prop) if v != 0}
        )
        gt_annotations.append(gt_record)
        prop_annotations.append(prop_record)
        save_raster(gt_dir / gt_record["file_name"], gt)
        save_raster(prop_dir / prop_record["file_name"], prop)

        phrases = []
        for k, sid in enumerate(region_ids):
            phrases.append(
                {
                    "text": f"region {k + 1}",
                    "first_token": k,
                    "last_token": k,
                    "is_plural": False,
                    "match_rank": "exact",
                    "via_vicinity": False,
                    "vicinity_distance": None,
                    "com": [0, 0],
                    "segment_ids": [sid],
                }
            )
        phrases.append(
            {
                "text": "two cars",
                "first_token": 4,
                "last_token": 5,
                "is_plural": True,
                "match_rank": "synonym",
                "via_vicinity": False,
                "vicinity_distance": None,
                "com": [0, 0],
                "segment_ids": [region_ids[0], region_ids[1]],
            }
        )
        grounded.append(
            {
                "narrative_id": f"o{image_id}",
                "image_id": image_id,
                "caption": "synthetic oracle narrative",
                "phrases": phrases,
            }
        )

    with open(out_dir / "gt_panoptic.json", "w", encoding="utf-8") as fh:
        json.dump({"annotations": gt_annotations}, fh, indent=2)
        fh.write("\n")
    with open(out_dir / "proposals.json", "w", encoding="utf-8") as fh:
        json.dump({"annotations": prop_annotations}, fh, indent=2)
        fh.write("\n")
    with open(out_dir / "grounded.jsonl", "w", encoding="utf-8") as fh:
        for record in grounded:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


# ----------------------------------------------------------------------
# caption corpus for chunker comparisons

CAPTIONS = """\
in this image we can see a dog on the grass
there is a man standing near a red car
two women are walking on the road
the sky is blue and there are many clouds
a woman wearing a white shirt is holding a baby
there are three buses parked beside the building
we can see trees behind the fence
a cat is sitting on the wooden table
the children are playing with a ball in the park
there is a big tree near the house
an old man is riding a bicycle
the water in the lake is very clear
some birds are flying in the sky
a girl in a yellow dress is eating an apple
there are many books on the shelf
the dog is running on the beach
two men are sitting on a bench
a bus is moving on the road
we can see mountains in the background
the walls of the room are painted white
there is a lamp on the table
a boy is holding a red balloon
the grass in the garden is green
people are standing near the gate
there is a clock on the wall
a horse is grazing in the field
the plate on the table has some food
two cars are parked near the building
a bird is sitting on the branch
there are flowers in the vase
the man in the black jacket is talking
a train is moving on the track
we can see boats in the water
the ceiling of the hall is very high
a police officer is standing on the road
there are many bottles in the fridge
the woman is cutting vegetables in the kitchen
a plane is flying above the clouds
the street has many shops on both sides
snow is falling on the houses
"""


# ----------------------------------------------------------------------


def build_golden(transfer_dir: Path) -> None:
    """Re-run the pipeline over the transfer set and freeze its output."""
    from tracelink.chunker import default_lexicon
    from tracelink.panoptic import load_annotations, load_category_index
    from tracelink.transfer import transfer_dataset, write_grounded
    from tracelink.wordnet import default_manual_table, load_wordnet

    categories = load_category_index(FIXTURES / "categories.json")
    annotations = load_annotations(transfer_dir / "panoptic.json")
    wordnet = load_wordnet(
        FIXTURES / "wordnet" / "index.noun", FIXTURES / "wordnet" / "data.noun"
    )
    grounded, diagnostics = transfer_dataset(
        transfer_dir / "narratives.jsonl",
        annotations,
        transfer_dir / "rasters",
        categories,
        wordnet,
        default_manual_table(),
        default_lexicon(),
        workers=1,
    )
    write_grounded(transfer_dir / "golden_grounded.jsonl", grounded)
    with open(transfer_dir / "golden_diagnostics.log", "w", encoding="utf-8") as fh:
        for line in diagnostics:
            fh.write(line + "\n")
    print(f"froze {len(grounded)} grounded narratives, {len(diagnostics)} diagnostics")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--golden",
        action="store_true",
        help="also regenerate the frozen expected outputs (inspect diffs!)",
    )
    args = parser.parse_args()

    FIXTURES.mkdir(parents=True, exist_ok=True)
    with open(FIXTURES / "categories.json", "w", encoding="utf-8") as fh:
        json.dump(CATEGORIES, fh, indent=2)
        fh.write("\n")

    wn_dir = FIXTURES / "wordnet"
    wn_dir.mkdir(exist_ok=True)
    (wn_dir / "data.noun").write_text(WN_DATA, encoding="utf-8")
    (wn_dir / "index.noun").write_text(WN_INDEX, encoding="utf-8")

    (FIXTURES / "captions.txt").write_text(CAPTIONS, encoding="utf-8")

    build_transfer(FIXTURES / "transfer")
    build_oracle(FIXTURES / "oracle")
    if args.golden:
        build_golden(FIXTURES / "transfer")
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
