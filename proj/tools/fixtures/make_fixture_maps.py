#!/usr/bin/env python3
# Copyright 2026 The shoptraj Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/maps/seen.json and data/maps/unseen.json.

Item positions sit 0.3 m in front of a shelf face so that every item is
within reach of exactly one shelf. Base ranks follow a serpentine walk from
the entrance, so nearby categories get small ranks.
"""

import json
import pathlib

CATALOG = {
    "fruit": [("Apples", "mid", "no", "fresh"), ("Bananas", "low", "no", "fresh"),
              ("Organic Strawberries", "high", "yes", "fresh"), ("Grapes", "mid", "no", "fresh")],
    "vegetable": [("Carrots", "low", "no", "fresh"), ("Spinach", "mid", "yes", "fresh"),
                  ("Tomatoes", "mid", "no", "fresh"), ("Broccoli", "low", "no", "pre-cut")],
    "meat": [("Beef", "high", "no", "fresh"), ("Chicken Thighs", "low", "no", "fresh"),
             ("Pork Belly", "mid", "no", "pre-cut"), ("Ground Beef", "low", "no", "fresh")],
    "fish": [("Salmon Fillet", "high", "no", "fresh"), ("Tuna Sashimi", "high", "no", "pre-cut"),
             ("Mackerel", "low", "no", "seasoned"), ("Shrimp", "mid", "no", "frozen")],
    "dairy": [("Milk", "low", "no", "fresh"), ("Greek Yogurt", "mid", "yes", "fresh"),
              ("Cheddar Cheese", "mid", "no", "fresh"), ("Butter", "mid", "no", "fresh")],
    "eggs": [("Free-range Eggs", "high", "yes", "fresh"), ("Brown Eggs", "mid", "no", "fresh"),
             ("Quail Eggs", "high", "no", "fresh"), ("Liquid Egg Whites", "mid", "no", "fresh")],
    "bakery": [("Sourdough Bread", "high", "no", "fresh"), ("Croissants", "mid", "no", "fresh"),
               ("Bagels", "low", "no", "fresh"), ("Whole Wheat Bread", "mid", "yes", "fresh")],
    "beverages": [("Orange Juice", "mid", "no", "fresh"), ("Sparkling Water", "low", "no", "fresh"),
                  ("Cola", "low", "no", "fresh"), ("Green Tea Bottle", "mid", "no", "fresh")],
    "alcohol": [("Red Wine", "high", "no", "fresh"), ("Craft Beer", "mid", "no", "fresh"),
                ("Sake", "high", "no", "fresh"), ("White Wine", "mid", "no", "fresh")],
    "snacks": [("Potato Chips", "low", "no", "seasoned"), ("Mixed Nuts", "high", "no", "seasoned"),
               ("Rice Crackers", "low", "no", "seasoned"), ("Popcorn", "low", "no", "seasoned")],
    "sweets": [("Chocolate Bar", "mid", "no", "fresh"), ("Cookies", "low", "no", "fresh"),
               ("Gummy Candy", "low", "no", "fresh"), ("Pudding", "mid", "no", "fresh")],
    "frozen": [("Frozen Pizza", "low", "no", "frozen"), ("Frozen Dumplings", "mid", "no", "frozen"),
               ("Ice Cream", "mid", "no", "frozen"), ("Frozen Vegetables", "low", "no", "frozen")],
    "seasoning": [("Salt", "low", "no", "fresh"), ("Black Pepper", "low", "no", "fresh"),
                  ("Soy Sauce", "mid", "no", "fresh"), ("Olive Oil", "high", "yes", "fresh")],
    "grains": [("Rice", "mid", "no", "fresh"), ("Pasta", "low", "no", "fresh"),
               ("Oatmeal", "mid", "yes", "fresh"), ("Quinoa", "high", "yes", "fresh")],
    "household": [("Dish Soap", "low", "no", "fresh"), ("Paper Towels", "low", "no", "fresh"),
                  ("Laundry Detergent", "mid", "no", "fresh"), ("Eco Sponges", "mid", "yes", "fresh")],
    "deli": [("Rotisserie Chicken", "mid", "no", "seasoned"), ("Sushi Platter", "high", "no", "pre-cut"),
             ("Potato Salad", "low", "no", "seasoned"), ("Fried Chicken", "low", "no", "seasoned")],
    "canned": [("Canned Tuna", "low", "no", "fresh"), ("Canned Tomatoes", "low", "no", "fresh"),
               ("Baked Beans", "low", "no", "seasoned"), ("Corn Soup", "mid", "no", "seasoned")],
    "coffee": [("Ground Coffee", "mid", "no", "fresh"), ("Instant Coffee", "low", "no", "fresh"),
               ("Fair-trade Coffee Beans", "high", "yes", "fresh"), ("Black Tea", "mid", "no", "fresh")],
}

FACE_OFFSET = 0.3
DISCOUNT = {"low": "yes", "mid": "no", "high": "no"}


def rect(x0, y0, x1, y1):
    return [round(x0, 3), round(y0, 3), round(x1, 3), round(y1, 3)]


def face_points(r, face, n):
    """n item positions evenly spread along one face of rectangle r."""
    x0, y0, x1, y1 = r
    pts = []
    for k in range(n):
        f = (k + 0.5) / n
        if face in ("left", "right"):
            y = y0 + f * (y1 - y0)
            x = x0 - FACE_OFFSET if face == "left" else x1 + FACE_OFFSET
        else:
            x = x0 + f * (x1 - x0)
            y = y0 - FACE_OFFSET if face == "bottom" else y1 + FACE_OFFSET
        pts.append([round(x, 3), round(y, 3)])
    return pts


def build(map_id, width, height, entrance, cashier, layout, prefix):
    shelves, items = [], []
    for category, r, faces in layout:
        shelves.append({"rect": r, "category": category})
        slots = []
        for face, n in faces:
            slots.extend(face_points(r, face, n))
        for k, pos in enumerate(slots):
            name, price, organic, state = CATALOG[category][k]
            items.append({
                "id": f"{prefix}-{category[:3]}{k + 1:02d}",
                "name": name,
                "category": category,
                "position": pos,
                "attributes": {"price": price, "organic": organic, "state": state,
                               "discount": DISCOUNT[price]},
            })
    ranks = {category: float(i + 1) for i, (category, _, _) in enumerate(layout)}
    return {
        "id": map_id,
        "width": width,
        "height": height,
        "agent_radius": 0.25,
        "reach_distance": 0.6,
        "entrance": entrance,
        "cashier": {"rect": cashier},
        "shelves": shelves,
        "items": items,
        "category_base_ranks": ranks,
    }


def seen_map():
    # Seven island columns split by a cross aisle, plus a top wall and a right wall.
    cols = [4.0, 7.5, 11.0, 14.5, 18.0, 21.5, 25.0]
    lower = lambda x: rect(x, 4.0, x + 1.0, 9.0)
    upper = lambda x: rect(x, 10.5, x + 1.0, 15.5)
    two_faces = [("left", 2), ("right", 2)]
    layout = [
        ("fruit", lower(cols[0]), two_faces),
        ("vegetable", upper(cols[0]), two_faces),
        ("bakery", rect(3.0, 18.2, 9.5, 19.2), [("bottom", 4)]),
        ("dairy", upper(cols[1]), two_faces),
        ("eggs", lower(cols[1]), two_faces),
        ("meat", lower(cols[2]), two_faces),
        ("fish", upper(cols[2]), two_faces),
        ("deli", rect(10.5, 18.2, 17.0, 19.2), [("bottom", 4)]),
        ("seasoning", upper(cols[3]), two_faces),
        ("grains", lower(cols[3]), two_faces),
        ("canned", lower(cols[4]), two_faces),
        ("snacks", upper(cols[4]), two_faces),
        ("beverages", rect(18.0, 18.2, 24.5, 19.2), [("bottom", 4)]),
        ("coffee", upper(cols[5]), two_faces),
        ("sweets", lower(cols[5]), two_faces),
        ("frozen", lower(cols[6]), two_faces),
        ("alcohol", upper(cols[6]), two_faces),
        ("household", rect(28.6, 6.0, 29.6, 16.0), [("left", 4)]),
    ]
    return build("seen", 30.0, 20.0, [1.5, 1.0], rect(25.5, 0.5, 29.0, 2.5), layout, "s")


def unseen_map():
    # Horizontal rows, entrance bottom-right, cashier bottom-left.
    rows = [3.0, 6.5, 10.0, 13.5]
    left = lambda y: rect(3.5, y, 10.5, y + 1.0)
    right = lambda y: rect(12.5, y, 19.5, y + 1.0)
    two_faces = [("bottom", 2), ("top", 2)]
    layout = [
        ("vegetable", right(rows[0]), two_faces),
        ("fruit", rect(22.4, 3.0, 23.4, 15.0), [("left", 4)]),
        ("meat", right(rows[1]), two_faces),
        ("fish", right(rows[2]), two_faces),
        ("dairy", right(rows[3]), two_faces),
        ("bakery", rect(13.0, 16.8, 20.0, 17.6), [("bottom", 4)]),
        ("beverages", rect(4.0, 16.8, 11.0, 17.6), [("bottom", 4)]),
        ("snacks", left(rows[3]), two_faces),
        ("alcohol", left(rows[2]), two_faces),
        ("seasoning", left(rows[1]), two_faces),
        ("grains", rect(0.4, 4.0, 1.4, 15.0), [("right", 4)]),
        ("household", left(rows[0]), two_faces),
    ]
    return build("unseen", 24.0, 18.0, [21.0, 1.0], rect(1.0, 0.5, 4.5, 2.5), layout, "u")


def main():
    root = pathlib.Path(__file__).resolve().parents[2] / "data" / "maps"
    root.mkdir(parents=True, exist_ok=True)
    for name, doc in (("seen", seen_map()), ("unseen", unseen_map())):
        (root / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
