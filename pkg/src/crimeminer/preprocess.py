"""Transformation of raw crime records into the unified six-attribute schema.

Each unified record carries the grouped crime type, the month name, the
weekday name, a four-hour time bin, the normalized location, and the year.
The raw clock hour is kept alongside for hour-resolution statistics.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from importlib import resources
from typing import Iterable, Mapping, Sequence, TextIO

from .errors import OutOfRangeError, RejectionThresholdError, UnmappedCategoryError
from .ingestion import RawCrimeRecord, Schema, normalize_category

MONTH_NAMES = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)
WEEKDAY_NAMES = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")


class TimeBin(Enum):
    """Four-hour slices of the day. T6 wraps midnight: 21:00 through 00:59."""

    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"

    @property
    def hours(self) -> tuple[int, ...]:
        return _BIN_HOURS[self]


_BIN_HOURS = {
    TimeBin.T1: (1, 2, 3, 4),
    TimeBin.T2: (5, 6, 7, 8),
    TimeBin.T3: (9, 10, 11, 12),
    TimeBin.T4: (13, 14, 15, 16),
    TimeBin.T5: (17, 18, 19, 20),
    TimeBin.T6: (21, 22, 23, 0),
}

TIME_BIN_ORDER = tuple(TimeBin)


def bin_time(hour: int) -> TimeBin:
    """Map an hour of day (0-23) to its four-hour bin; hour 0 belongs to T6."""
    if not isinstance(hour, int) or not 0 <= hour <= 23:
        raise OutOfRangeError(f"hour must be an integer in 0..23, got {hour!r}")
    if hour == 0 or hour >= 21:
        return TimeBin.T6
    return TIME_BIN_ORDER[(hour - 1) // 4]


class CrimeCategory(IntEnum):
    """The six unified crime types, numbered 1-6 in canonical order."""

    ASSAULT = 1
    DRUG_ALCOHOL = 2
    OTHER_CRIMES = 3
    PUBLIC_DISORDER = 4
    THEFT = 5
    WHITE_COLLAR_CRIME = 6

    @property
    def label(self) -> str:
        return _CATEGORY_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "CrimeCategory":
        key = re.sub(r"[\s_-]+", " ", text.strip().lower())
        try:
            return _LABEL_LOOKUP[key]
        except KeyError:
            raise ValueError(f"unknown crime type {text!r}") from None


_CATEGORY_LABELS = {
    CrimeCategory.ASSAULT: "Assault",
    CrimeCategory.DRUG_ALCOHOL: "Drug Alcohol",
    CrimeCategory.OTHER_CRIMES: "Other Crimes",
    CrimeCategory.PUBLIC_DISORDER: "Public Disorder",
    CrimeCategory.THEFT: "Theft",
    CrimeCategory.WHITE_COLLAR_CRIME: "White Collar Crime",
}
_LABEL_LOOKUP = {label.lower(): category for category, label in _CATEGORY_LABELS.items()}


@dataclass(frozen=True, slots=True)
class UnifiedCrimeRecord:
    """One preprocessed crime event in the unified categorical schema."""

    crime_type: CrimeCategory
    month: str
    day: str
    time: TimeBin
    location: str
    year: int
    hour: int  # raw clock hour 0-23, kept for hour-resolution statistics


def derive_temporal(when: dt.datetime) -> tuple[str, str, TimeBin, int]:
    """Month name, weekday name, time bin, and year of a civil timestamp.

    Minutes are ignored; the bin is determined by the hour alone.
    """
    return (
        MONTH_NAMES[when.month - 1],
        WEEKDAY_NAMES[when.weekday()],
        bin_time(when.hour),
        when.year,
    )


@dataclass(frozen=True)
class TypeMapping:
    """Grouping of raw offense categories into the six unified types.

    The mapping must cover every raw category actually present in the data;
    lookups of unknown categories raise and are counted by the caller.
    """

    entries: Mapping[str, CrimeCategory]

    @classmethod
    def from_dict(cls, raw: Mapping[str, str]) -> "TypeMapping":
        return cls({normalize_category(k): CrimeCategory.from_label(v) for k, v in raw.items()})

    @classmethod
    def from_json_file(cls, path) -> "TypeMapping":
        with open(path, encoding="utf-8") as fp:
            obj = json.load(fp)
        if not isinstance(obj, dict):
            raise ValueError(f"{path}: type mapping must be a JSON object")
        return cls.from_dict(obj)

    @classmethod
    def for_schema(cls, schema: Schema) -> "TypeMapping":
        name = "denver_type_mapping.json" if schema is Schema.DENVER else "la_type_mapping.json"
        text = resources.files("crimeminer.data").joinpath(name).read_text("utf-8")
        return cls.from_dict(json.loads(text))


def map_crime_type(raw_category: str, mapping: TypeMapping) -> CrimeCategory:
    """Exact lookup of a normalized raw category in the mapping."""
    try:
        return mapping.entries[raw_category]
    except KeyError:
        raise UnmappedCategoryError(raw_category) from None


@dataclass
class PreprocessReport:
    """Accounting for one preprocessing run."""

    schema: str
    rows_in: int = 0
    rows_out: int = 0
    rows_rejected: int = 0
    rejected_categories: dict[str, int] | None = None
    reasons: dict[str, int] | None = None

    def __post_init__(self):
        if self.rejected_categories is None:
            self.rejected_categories = {}
        if self.reasons is None:
            self.reasons = {}

    def reject(self, reason: str) -> None:
        self.rows_rejected += 1
        self.reasons[reason] = self.reasons.get(reason, 0) + 1

    def to_json_dict(self) -> dict:
        return {
            "schema": self.schema,
            "rows_in": self.rows_in,
            "rows_out": self.rows_out,
            "rows_rejected": self.rows_rejected,
            "rejected_categories": dict(sorted(self.rejected_categories.items())),
            "reasons": dict(sorted(self.reasons.items())),
        }

    def write_json(self, fp: TextIO) -> None:
        json.dump(self.to_json_dict(), fp, indent=2, sort_keys=True)
        fp.write("\n")


def preprocess_dataset(
    records: Sequence[RawCrimeRecord],
    schema: Schema,
    mapping: TypeMapping,
    *,
    max_reject_fraction: float = 0.01,
) -> tuple[list[UnifiedCrimeRecord], PreprocessReport]:
    """Convert crime-filtered raw records into unified records, order preserved.

    Records whose offense category is absent from the mapping (or which lack a
    clock time) are excluded and counted. If the rejected fraction exceeds
    ``max_reject_fraction`` the run aborts: a large rejection rate means the
    mapping does not fit the dataset.
    """
    report = PreprocessReport(schema=schema.value)
    out: list[UnifiedCrimeRecord] = []
    for record in records:
        report.rows_in += 1
        if record.time is None:
            report.reject("missing-time")
            continue
        try:
            category = map_crime_type(record.offense_category, mapping)
        except UnmappedCategoryError:
            report.reject("unmapped-category")
            counts = report.rejected_categories
            counts[record.offense_category] = counts.get(record.offense_category, 0) + 1
            continue
        month, day, time_bin, year = derive_temporal(dt.datetime.combine(record.date, record.time))
        out.append(
            UnifiedCrimeRecord(
                crime_type=category,
                month=month,
                day=day,
                time=time_bin,
                location=record.location_name,
                year=year,
                hour=record.time.hour,
            )
        )
        report.rows_out += 1

    if report.rows_in and report.rows_rejected / report.rows_in > max_reject_fraction:
        worst = sorted(report.rejected_categories.items(), key=lambda kv: (-kv[1], kv[0]))[:5]
        detail = ", ".join(f"{cat!r} x{n}" for cat, n in worst) or "no category detail"
        raise RejectionThresholdError(
            f"rejected {report.rows_rejected}/{report.rows_in} records "
            f"(> {max_reject_fraction:.2%} allowed); top unmapped: {detail}"
        )
    return out, report


# --- unified-record JSON Lines interchange ----------------------------------

def unified_to_json_dict(record: UnifiedCrimeRecord) -> dict:
    return {
        "type": record.crime_type.label,
        "type_id": int(record.crime_type),
        "month": record.month,
        "day": record.day,
        "time": record.time.value,
        "location": record.location,
        "year": record.year,
        "hour": record.hour,
    }


def unified_from_json_dict(obj: Mapping) -> UnifiedCrimeRecord:
    category = CrimeCategory(int(obj["type_id"]))
    if "type" in obj and CrimeCategory.from_label(str(obj["type"])) is not category:
        raise ValueError(f"type {obj['type']!r} does not match type_id {obj['type_id']}")
    month = str(obj["month"])
    if month not in MONTH_NAMES:
        raise ValueError(f"bad month {month!r}")
    day = str(obj["day"])
    if day not in WEEKDAY_NAMES:
        raise ValueError(f"bad day {day!r}")
    time_bin = TimeBin(str(obj["time"]))
    location = str(obj["location"]).strip()
    if not location:
        raise ValueError("empty location")
    hour = int(obj["hour"])
    if not 0 <= hour <= 23:
        raise ValueError(f"bad hour {hour}")
    return UnifiedCrimeRecord(
        crime_type=category,
        month=month,
        day=day,
        time=time_bin,
        location=location,
        year=int(obj["year"]),
        hour=hour,
    )


def write_unified_jsonl(records: Iterable[UnifiedCrimeRecord], fp: TextIO) -> None:
    for record in records:
        fp.write(json.dumps(unified_to_json_dict(record), sort_keys=True))
        fp.write("\n")


def read_unified_jsonl(fp: TextIO) -> list[UnifiedCrimeRecord]:
    records = []
    for line_number, line in enumerate(fp, start=1):
        if not line.strip():
            continue
        try:
            records.append(unified_from_json_dict(json.loads(line)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad unified record on line {line_number}: {exc}") from exc
    return records
