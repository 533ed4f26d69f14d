"""Notification policy gates, message rendering and channel dispatch."""

from sentinel.notify.policy import NotificationPolicy, in_period, should_notify
from sentinel.notify.render import NotificationMessage, render_message
from sentinel.notify.dispatch import DispatchRecord, dispatch

__all__ = [
    "DispatchRecord",
    "NotificationMessage",
    "NotificationPolicy",
    "dispatch",
    "in_period",
    "render_message",
    "should_notify",
]
