import os
from pathlib import Path

from rich.console import Console
from rich.markdown import Markdown

from specsampler.storage import CheckOutcome, Resource, RuntimeData


class Chores:
    """
    A class to handle post-execution chores like writing result files and generating reports.
    """

    def __init__(self, workdir: str, generate_report: bool, storage: RuntimeData):
        """
        Initializes the Chores object.

        Args:
            workdir: The working directory for logs and reports.
            generate_report: Whether to generate a report file on cleanup.
            storage: The RuntimeData object collecting outcomes, notes and resources.
        """
        self.workdir = workdir
        self.should_generate_report = generate_report
        self.storage = storage
        self.console = Console(stderr=True)
        Path(self.workdir).mkdir(parents=True, exist_ok=True)

    @staticmethod
    def indexed_filename(filename: str) -> str:
        """
        Generates an indexed filename if the original filename already exists.

        Args:
            filename: The original filename.

        Returns:
            The original filename when it is free, else the first free indexed variant.
        """
        if not os.path.exists(filename):
            return filename
        i = 0
        name, extension = os.path.splitext(filename)
        while os.path.exists(f'{name} ({i}){extension}'):
            i += 1

        return f'{name} ({i}){extension}'

    def write_output(self, path: str, content: str, name: str, details: str = '-'):
        """
        Writes a command result to a file and records it as a resource.

        Args:
            path: Destination path; overwritten when present so reruns stay byte-identical.
            content: Text to write.
            name: Resource name shown in the report.
            details: Short description of the file.
        """
        with open(path, 'w', newline='') as f:
            f.write(content)

        self.storage.resources.append(
            Resource(
                name=name,
                path=path,
                details=details,
                type='CSV file' if path.endswith('.csv') else 'Result file'
            )
        )

    def get_notes(self):
        """
        Generates a Markdown string containing all the notes.

        Returns:
            A Markdown string containing all the notes.
        """
        notes = '# Notes\n'
        for message in self.storage.notes:
            notes += message.get_markdown()
        return notes

    def get_outcomes_markdown(self):
        """
        Generates a Markdown table of the recorded verification outcomes.

        Returns:
            A Markdown string with one row per invariant group.
        """
        outcomes_md = '# Verification\n'
        outcomes_md += CheckOutcome.get_table_header()

        for outcome in self.storage.outcomes:
            outcomes_md += outcome.get_row_markdown()
        return outcomes_md

    def get_resources_markdown(self):
        """
        Generates a Markdown string containing a table of resources.

        Returns:
            A Markdown string containing a table of resources.
        """
        resources_md = '# Resources\n'
        resources_md += Resource.get_table_header()

        for resource in self.storage.resources:
            resources_md += resource.get_row_markdown()
        return resources_md

    def generate_report(self, filename: str = 'report.md'):
        """
        Generates a report file containing outcomes, notes and resources.

        Args:
            filename: The name of the report file inside the working directory.
        """
        if self.storage.outcomes or self.storage.resources or self.storage.notes:
            filename = self.indexed_filename(os.path.join(self.workdir, filename))
            self.storage.resources.append(
                Resource(
                    name='Run Report',
                    path=filename,
                    details='Verification outcomes and generated files of this run',
                    type='Markdown file'
                )
            )
            report = ''
            if self.storage.outcomes:
                report = self.get_outcomes_markdown()

            if self.storage.notes:
                report += '\n' + self.get_notes()

            if self.storage.resources:
                report += '\n' + self.get_resources_markdown()

            self.console.print(Markdown(report))

            with open(filename, 'w') as file:
                file.write(report)

    def cleanup(self):
        """
        Performs cleanup tasks based on the configuration.
        """
        if self.should_generate_report:
            self.generate_report('report.md')
