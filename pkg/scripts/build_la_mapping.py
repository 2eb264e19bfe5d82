#!/usr/bin/env python3
"""Materialize the Los Angeles offense-category type mapping.

Applies ordered keyword rules to a vocabulary of raw "Crm Cd Desc" strings
and writes exact {raw category: unified type} entries. The bundled default
vocabulary covers the common LAPD category strings; operators with the real
feed can pass their own distinct-category list (one per line) and regenerate:

    python scripts/build_la_mapping.py --vocab my_categories.txt \
        --output src/crimeminer/data/la_type_mapping.json

Categories matching no rule fall through to "Other Crimes" (reported on
stderr so surprises are visible).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from crimeminer.ingestion import normalize_category

# Exact-name overrides evaluated before any keyword rule.
EXACT_OVERRIDES = {
    "drunk roll": "Theft",  # theft from an intoxicated victim, not an alcohol offense
}

# Ordered (type, keywords) rules; first matching keyword wins.
KEYWORD_RULES = (
    ("Drug Alcohol", ("narcotic", "drug", "liquor", "alcohol", "drunk driving", "dui")),
    (
        "White Collar Crime",
        (
            "fraud",
            "forgery",
            "embezzle",
            "bunco",
            "counterfeit",
            "credit card",
            "identity",
            "bribery",
            "extortion",
            "computer",
            "insurance",
            "dishonest employee",
        ),
    ),
    (
        "Theft",
        (
            "theft",
            "burglary",
            "robbery",
            "stolen",
            "shoplift",
            "snatch",
            "pickpocket",
            "till tap",
            "larceny",
        ),
    ),
    (
        "Assault",
        (
            "assault",
            "battery",
            "homicide",
            "manslaughter",
            "rape",
            "sex",
            "sodomy",
            "oral copulation",
            "lewd",
            "kidnap",
            "child",
            "chld",
            "shots fired",
            "brandish",
            "threat",
            "stalking",
            "lynch",
            "false imprisonment",
            "human trafficking",
        ),
    ),
    (
        "Public Disorder",
        (
            "vandalism",
            "trespass",
            "disturbing",
            "graffiti",
            "prostitution",
            "pimping",
            "pandering",
            "indecent exposure",
            "peeping",
            "weapon",
            "firearm",
            "bomb",
            "disorderly",
            "loiter",
        ),
    ),
)

DEFAULT_TYPE = "Other Crimes"

# Common LAPD "Crm Cd Desc" strings; a reconstruction, not the authoritative
# 128-value list, which is why --vocab exists.
DEFAULT_VOCABULARY = """\
BATTERY - SIMPLE ASSAULT
ASSAULT WITH DEADLY WEAPON, AGGRAVATED ASSAULT
ASSAULT WITH DEADLY WEAPON ON POLICE OFFICER
INTIMATE PARTNER - SIMPLE ASSAULT
INTIMATE PARTNER - AGGRAVATED ASSAULT
OTHER ASSAULT
BATTERY POLICE (SIMPLE)
BATTERY ON A FIREFIGHTER
BATTERY WITH SEXUAL CONTACT
CRIMINAL HOMICIDE
MANSLAUGHTER, NEGLIGENT
RAPE, FORCIBLE
RAPE, ATTEMPTED
SEXUAL PENETRATION W/FOREIGN OBJECT
ORAL COPULATION
SODOMY/SEXUAL CONTACT B/W PENIS OF ONE PERS TO ANUS OTH
LEWD CONDUCT
LEWD/LASCIVIOUS ACTS WITH CHILD
CHILD ABUSE (PHYSICAL) - SIMPLE ASSAULT
CHILD ABUSE (PHYSICAL) - AGGRAVATED ASSAULT
CHILD ANNOYING (17YRS & UNDER)
CHILD NEGLECT (SEE 300 W.I.C.)
CHILD PORNOGRAPHY
CHILD STEALING
CRM AGNST CHLD (13 OR UNDER) (14-15 & SUSP 10 YRS OLDER)
CRIMINAL THREATS - NO WEAPON DISPLAYED
THREATENING PHONE CALLS/LETTERS
KIDNAPPING
KIDNAPPING - GRAND ATTEMPT
FALSE IMPRISONMENT
STALKING
HUMAN TRAFFICKING - COMMERCIAL SEX ACTS
HUMAN TRAFFICKING - INVOLUNTARY SERVITUDE
LYNCHING
LYNCHING - ATTEMPTED
SHOTS FIRED AT INHABITED DWELLING
SHOTS FIRED AT MOVING VEHICLE, TRAIN OR AIRCRAFT
ROBBERY
ATTEMPTED ROBBERY
BURGLARY
BURGLARY, ATTEMPTED
BURGLARY FROM VEHICLE
BURGLARY FROM VEHICLE, ATTEMPTED
THEFT PLAIN - PETTY ($950 & UNDER)
THEFT PLAIN - ATTEMPT
THEFT-GRAND ($950.01 & OVER)EXCPT,GUNS,FOWL,LIVESTK,PROD
THEFT, PERSON
THEFT FROM PERSON - ATTEMPT
THEFT FROM MOTOR VEHICLE - PETTY ($950 & UNDER)
THEFT FROM MOTOR VEHICLE - GRAND ($400 AND OVER)
THEFT FROM MOTOR VEHICLE - GRAND ($950.01 AND OVER)
THEFT FROM MOTOR VEHICLE - ATTEMPT
VEHICLE - STOLEN
VEHICLE - ATTEMPT STOLEN
BIKE - STOLEN
BIKE - ATTEMPTED STOLEN
BOAT - STOLEN
SHOPLIFTING - PETTY THEFT ($950 & UNDER)
SHOPLIFTING-GRAND THEFT ($950.01 & OVER)
SHOPLIFTING - ATTEMPT
PURSE SNATCHING
PURSE SNATCHING - ATTEMPT
PICKPOCKET
PICKPOCKET, ATTEMPT
TILL TAP - PETTY ($950 & UNDER)
TILL TAP - GRAND THEFT ($950.01 & OVER)
THEFT, COIN MACHINE - PETTY ($950 & UNDER)
THEFT, COIN MACHINE - GRAND ($950.01 & OVER)
DRUNK ROLL
THEFT OF IDENTITY
DOCUMENT FORGERY / STOLEN FELONY
CREDIT CARDS, FRAUD USE ($950 & UNDER)
CREDIT CARDS, FRAUD USE ($950.01 & OVER)
EMBEZZLEMENT, GRAND THEFT ($950.01 & OVER)
EMBEZZLEMENT, PETTY THEFT ($950 & UNDER)
BUNCO, GRAND THEFT
BUNCO, PETTY THEFT
BUNCO, ATTEMPT
COUNTERFEIT
GRAND THEFT / INSURANCE FRAUD
DEFRAUDING INNKEEPER/THEFT OF SERVICES, $950 & UNDER
DEFRAUDING INNKEEPER/THEFT OF SERVICES, OVER $950.01
DISHONEST EMPLOYEE - GRAND THEFT
DISHONEST EMPLOYEE - PETTY THEFT
UNAUTHORIZED COMPUTER ACCESS
BRIBERY
EXTORTION
VANDALISM - FELONY ($400 & OVER, ALL CHURCH VANDALISMS)
VANDALISM - MISDEAMEANOR ($399 OR UNDER)
TRESPASSING
DISTURBING THE PEACE
PROSTITUTION/ALLOWING PLACE
PIMPING
PANDERING
INDECENT EXPOSURE
PEEPING TOM
WEAPONS POSSESSION/BOMBING
BRANDISH WEAPON
DISCHARGE FIREARMS/SHOTS FIRED
BOMB SCARE
DRUGS, TO A MINOR
LIQUOR LAWS
ARSON
OTHER MISCELLANEOUS CRIME
VIOLATION OF COURT ORDER
VIOLATION OF RESTRAINING ORDER
VIOLATION OF TEMPORARY RESTRAINING ORDER
CONTEMPT OF COURT
RESISTING ARREST
FALSE POLICE REPORT
RECKLESS DRIVING
FAILURE TO YIELD
DRIVING WITHOUT OWNER CONSENT (DWOC)
CRUELTY TO ANIMALS
ILLEGAL DUMPING
ABORTION/ILLEGAL
CONSPIRACY
""".strip().splitlines()


def classify_category(raw: str) -> str:
    name = normalize_category(raw)
    if name in EXACT_OVERRIDES:
        return EXACT_OVERRIDES[name]
    for unified, keywords in KEYWORD_RULES:
        if any(keyword in name for keyword in keywords):
            return unified
    return DEFAULT_TYPE


def build_mapping(vocabulary: list[str]) -> dict[str, str]:
    mapping: dict[str, str] = {}
    fallthrough = []
    for raw in vocabulary:
        raw = raw.strip()
        if not raw:
            continue
        key = normalize_category(raw)
        unified = classify_category(raw)
        mapping[key] = unified
        if unified == DEFAULT_TYPE and "other" not in key and "miscellaneous" not in key:
            fallthrough.append(key)
    if fallthrough:
        print(f"note: {len(fallthrough)} categories fell through to {DEFAULT_TYPE!r}:", file=sys.stderr)
        for name in fallthrough:
            print(f"  {name}", file=sys.stderr)
    return mapping


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--vocab", help="file with one raw category per line (default: bundled list)")
    parser.add_argument(
        "--output",
        default=str(Path(__file__).resolve().parent.parent / "src/crimeminer/data/la_type_mapping.json"),
    )
    args = parser.parse_args()
    if args.vocab:
        vocabulary = Path(args.vocab).read_text(encoding="utf-8").splitlines()
    else:
        vocabulary = DEFAULT_VOCABULARY
    mapping = build_mapping(vocabulary)
    with open(args.output, "w", encoding="utf-8", newline="") as fp:
        json.dump(mapping, fp, indent=2, sort_keys=True)
        fp.write("\n")
    print(f"wrote {len(mapping)} entries to {args.output}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
