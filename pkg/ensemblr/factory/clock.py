"""Simulation time. One tick is one minute; day 0 starts at minute 0 and is a Monday."""

MINUTES_PER_DAY = 1440
DAYS_PER_WEEK = 7
WEEKEND = (5, 6)


def day_of(now: int) -> int:
    return now // MINUTES_PER_DAY


def day_of_week(now: int) -> int:
    """0 is Monday, 6 is Sunday."""
    return day_of(now) % DAYS_PER_WEEK


def is_weekend_day(dow: int) -> bool:
    return dow in WEEKEND


def day_start(day: int) -> int:
    return day * MINUTES_PER_DAY


class Clock:
    """Current tick of one simulation."""

    def __init__(self, now: int = 0) -> None:
        self.now = now

    def __repr__(self) -> str:
        return f"Clock(day={self.day}, minute={self.minute_of_day})"

    @classmethod
    def at_day(cls, day: int, minute: int = 0) -> "Clock":
        return cls(day_start(day) + minute)

    @property
    def day(self) -> int:
        return day_of(self.now)

    @property
    def minute_of_day(self) -> int:
        return self.now % MINUTES_PER_DAY

    @property
    def day_of_week(self) -> int:
        return day_of_week(self.now)

    @property
    def is_weekend(self) -> bool:
        return is_weekend_day(self.day_of_week)

    def advance(self, minutes: int = 1) -> int:
        self.now += minutes
        return self.now
