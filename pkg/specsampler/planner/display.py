from __future__ import annotations

import logging
from typing import Literal

from pydantic import BaseModel
from rich.align import Align
from rich.console import Console, ConsoleRenderable, Group, RichCast
from rich.live import Live
from rich.markdown import Markdown
from rich.panel import Panel
from rich.progress import Progress, TaskID
from rich.status import Status
from rich.table import Table
from rich.text import Text

from specsampler.storage import CheckOutcome

logger = logging.getLogger('App.RichDisplay')


class PanelTheme(BaseModel):
    """
    Theme for a panel.

    Attributes:
        panel_style: The style of the panel.
        panel_content_style: The style of the content within the panel.
        panel_border_style: The style of the border of the panel.
    """
    panel_style: str
    panel_content_style: str
    panel_border_style: str


class DisplayTheme(BaseModel):
    """
    Theme for the display.

    Attributes:
        default_dark: The default dark color.
        default_highlight: The default highlight color.
        spinner: The type of spinner to use.
        logs_panel: The theme for the logs panel.
        details_panel: The theme for the details panel.
    """
    default_dark: str = 'grey19'
    default_highlight: str = 'bright_black'
    spinner: str = 'dots'

    logs_panel: PanelTheme = PanelTheme(
        panel_style='default',
        panel_content_style='bright_white',
        panel_border_style=default_highlight
    )
    details_panel: PanelTheme = PanelTheme(
        panel_style=default_dark,
        panel_content_style='cyan1',
        panel_border_style='cyan2'
    )


class RichDisplay:
    """
    Live progress display on the error stream while a verification suite runs.

    Attributes:
        title: The title of the display.
        theme: The theme to use for the display.
    """

    def __init__(self, title: str, theme: DisplayTheme = DisplayTheme()):
        self.running = False
        self.theme = theme
        self.title_text: str = title
        self.console = Console(stderr=True)
        self.last_added_item: str | ConsoleRenderable | RichCast = ''

        self.logs_content = Group()
        self.progress = Progress(console=self.console)
        self.logs_panel = self.get_standard_panel(self.logs_content, self.theme.logs_panel, title)
        self.details_panel = self.get_standard_panel('', self.theme.details_panel)

        self.live = Live(
            renderable=Group(self.logs_panel, self.details_panel, self.progress),
            console=self.console,
            refresh_per_second=12,
            transient=True
        )

    @staticmethod
    def get_standard_panel(content: ConsoleRenderable | RichCast | str, theme: PanelTheme, title: str = None):
        """
        Creates a standard panel with the given content and theme.

        Args:
            content: The content to display in the panel.
            theme: The theme to use for the panel.
            title: Optional panel title.

        Returns:
            A Panel object representing the standard panel.
        """
        return Panel(
            Align(content, align='left', vertical='middle'),
            title=title,
            style=f'{theme.panel_content_style} on {theme.panel_style}',
            border_style=theme.panel_border_style
        )

    def start(self):
        if not self.running:
            self.live.start()
            self.running = True

    def stop(self):
        if self.running:
            self.live.stop()
            self.running = False

    def push_to_logs(self, item: ConsoleRenderable | RichCast | str):
        """
        Pushes an item to the logs panel, replacing a pending status loader.

        Args:
            item: The item to push to the logs panel.
        """
        if isinstance(self.last_added_item, Status):
            self.logs_content.renderables.pop()

        logger.debug(f'Adding item {item}')
        self.last_added_item = item
        self.logs_content.renderables.append(item)

    def advance_progress_bar(self, task_id: int, advance_by: int):
        logger.debug(f'Advancing progress bar {task_id} by {advance_by}')
        self.progress.advance(TaskID(task_id), advance=advance_by)

    def add_progress_bar(self, title: str, total: int) -> int:
        logger.debug(f'Adding progress bar {title} with total {total}')
        task_id = self.progress.add_task(title, total=total)
        return int(task_id)

    def add_item_to_logs(self, text: str, item_type: Literal['loading', 'success', 'error']):
        """
        Adds an item to the logs panel with the specified type.

        Args:
            text: The text of the item to add.
            item_type: The type of item to add.
        """
        if item_type == 'loading':
            item = Status(Text.from_markup(f'[bold]{text}[/]'), spinner=self.theme.spinner)
        elif item_type == 'success':
            item = Text.from_markup(text=f'[green]:white_check_mark: {text}[/]', justify='left')
        elif item_type == 'error':
            item = Text.from_markup(text=f'[bright_red]:cross_mark: {text}[/]', justify='left')

        self.push_to_logs(item)

    def set_details_message(self, message: str, print_raw: bool = False):
        if not print_raw:
            message = Markdown(message, style=self.theme.details_panel.panel_content_style)
        self.details_panel.renderable = Align(message, align='left', vertical='middle')

    @staticmethod
    def summary_table(title: str, outcomes: list[CheckOutcome]) -> Table:
        """
        Builds the pass/fail table of a finished suite.

        Args:
            title: The table title.
            outcomes: Recorded group outcomes.

        Returns:
            A Table with one row per group.
        """
        table = Table(title=title)
        table.add_column('Group')
        table.add_column('Result')
        table.add_column('Max error', justify='right')
        table.add_column('Tolerance', justify='right')
        table.add_column('Seconds', justify='right')
        table.add_column('Detail')
        for outcome in outcomes:
            result = '[green]pass[/]' if outcome.passed else '[bright_red]FAIL[/]'
            table.add_row(outcome.name, result, f'{outcome.max_error:.3e}', f'{outcome.tolerance:.1e}',
                          f'{outcome.elapsed:.2f}', outcome.detail)
        return table
