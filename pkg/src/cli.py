import argparse
import json
import logging
import os
import shlex
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional

from dotenv import load_dotenv
from prompt_toolkit import PromptSession
from prompt_toolkit.completion import WordCompleter
from prompt_toolkit.formatted_text import HTML
from prompt_toolkit.history import FileHistory
from prompt_toolkit.styles import Style

from src.config import ConfigError, load_config
from src.helpers import print_h_bar
from src.scene import SCENES_DIR, CatoptricaScene, run

# Configure logging
load_dotenv()
logging.basicConfig(level=os.getenv("CATOPTRICA_LOG_LEVEL", "INFO").upper(), format='%(message)s')
logger = logging.getLogger("cli")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catoptrica",
        description="Caustics of a point source reflected in cylindrical mirrors",
    )
    subparsers = parser.add_subparsers(dest="command")
    for name, summary in (
        ("reflect", "Sample the reflected congruence"),
        ("focal", "Emit the focal curve and focal surface point clouds"),
        ("wavefront", "Integrate the wavefronts of the reflected congruence"),
        ("verify", "Check closed forms against the reflection law and the ray-tracing oracle"),
    ):
        sub = subparsers.add_parser(name, help=summary)
        sub.add_argument("--config", required=True, help="Path to the JSON run configuration")
        sub.add_argument("--out", help="Output file; diagnostics go to <out>.diagnostics.csv")
        sub.add_argument("--format", choices=["csv", "json"], help="Output format (default from config)")
        sub.add_argument("--signs", choices=["PlusPlus", "all"], help="Orientation choices to sweep")
        if name == "focal":
            sub.add_argument("--numeric", action="store_true", help="Add the focal set computed from the optical scalars")
        if name == "verify":
            sub.add_argument("--corrupt-reflection-sign", action="store_true", help=argparse.SUPPRESS)
    return parser


def _run_args(args: argparse.Namespace, name: Optional[str] = None) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        logger.error(f"❌ Invalid config {args.config}:")
        for loc, msg in e.errors:
            logger.error(f"  - {loc}: {msg}" if loc else f"  - {msg}")
        return 1
    return run(
        args.command, cfg,
        out=Path(args.out) if args.out else None,
        fmt=args.format,
        numeric=getattr(args, "numeric", False),
        signs=args.signs,
        corrupt_reflection_sign=getattr(args, "corrupt_reflection_sign", False),
        name=name or Path(args.config).stem,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """One-shot entry point; without a command it starts the interactive shell"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors; 2 is reserved for verification failures
        return 0 if e.code == 0 else 1

    if args.command is None:
        CatoptricaCLI().main_loop()
        return 0
    return _run_args(args)


@dataclass
class Command:
    """Dataclass to represent a CLI command"""
    name: str
    description: str
    tips: List[str]
    handler: Callable
    aliases: List[str] = None

    def __post_init__(self):
        if self.aliases is None:
            self.aliases = []


class CatoptricaCLI:
    def __init__(self, scenes_dir: Path = SCENES_DIR):
        self.scene: Optional[CatoptricaScene] = None
        self.scene_path: Optional[Path] = None
        self.scenes_dir = Path(scenes_dir)
        self.parser = build_parser()

        # Create config directory if it doesn't exist
        self.config_dir = Path.home() / '.catoptrica'
        self.config_dir.mkdir(exist_ok=True)

        # Initialize command registry
        self._initialize_commands()

        # Setup prompt toolkit components
        self._setup_prompt_toolkit()

    def _initialize_commands(self) -> None:
        """Initialize all CLI commands"""
        self.commands: Dict[str, Command] = {}

        self._register_command(
            Command(
                name="help",
                description="Displays a list of all available commands, or help for a specific command.",
                tips=["Try 'help' to see available commands.",
                      "Try 'help {command}' to get more information about a specific command."],
                handler=self.help,
                aliases=['h', '?']
            )
        )

        self._register_command(
            Command(
                name="clear",
                description="Clears the terminal screen.",
                tips=["Use this command to clean up your terminal view"],
                handler=self.clear_screen,
                aliases=['cls']
            )
        )

        ################## SCENES ##################
        self._register_command(
            Command(
                name="list-scenes",
                description="Lists all scene configurations on file.",
                tips=["Scenes are stored in the 'scenes' directory",
                      "Use 'load-scene' to load one"],
                handler=self.list_scenes,
                aliases=['scenes', 'ls-scenes']
            )
        )

        self._register_command(
            Command(
                name="load-scene",
                description="Loads a scene configuration from the scenes directory.",
                tips=["Format: load-scene {scene_name}",
                      "Use 'list-scenes' to see available scenes"],
                handler=self.load_scene,
                aliases=['load']
            )
        )

        self._register_command(
            Command(
                name="set-default-scene",
                description="Define which scene is loaded when the CLI starts.",
                tips=["You can also just change the 'default_scene' field in scenes/general.json"],
                handler=self.set_default_scene,
                aliases=['default']
            )
        )

        ################## COMMANDS ##################
        for name, description, aliases in (
            ("reflect", "Samples the reflected congruence of the loaded scene.", ['r']),
            ("focal", "Computes the focal curve and focal surface of the loaded scene.", ['f']),
            ("wavefront", "Integrates the wavefronts of the reflected congruence.", ['w']),
            ("verify", "Checks the closed forms against the reflection law and the ray tracer.", ['v', 'check']),
        ):
            self._register_command(
                Command(
                    name=name,
                    description=description,
                    tips=[f"Format: {name} [--out path] [--format csv|json] [--signs PlusPlus|all]"
                          + (" [--numeric]" if name == "focal" else ""),
                          "Without --out, the first rows are printed"],
                    handler=self.scene_command,
                    aliases=aliases
                )
            )

        ################## MISC ##################
        self._register_command(
            Command(
                name="exit",
                description="Exits the catoptrica CLI.",
                tips=["You can also use Ctrl+D to exit"],
                handler=self.exit,
                aliases=['quit', 'q']
            )
        )

    def _setup_prompt_toolkit(self) -> None:
        """Setup prompt toolkit components"""
        self.style = Style.from_dict({
            'prompt': 'ansicyan bold',
            'command': 'ansigreen',
            'error': 'ansired bold',
            'success': 'ansigreen bold',
            'warning': 'ansiyellow',
        })

        # Use FileHistory for persistent command history
        history_file = self.config_dir / 'history.txt'

        self.completer = WordCompleter(
            list(self.commands.keys()),
            ignore_case=True,
            sentence=True
        )

        self.session = PromptSession(
            completer=self.completer,
            style=self.style,
            history=FileHistory(str(history_file))
        )

    ###################
    # Helper Functions
    ###################
    def _register_command(self, command: Command) -> None:
        """Register a command and its aliases"""
        self.commands[command.name] = command
        for alias in command.aliases:
            self.commands[alias] = command

    def _get_prompt_message(self) -> HTML:
        """Generate the prompt message based on current state"""
        scene_status = f"({self.scene.name})" if self.scene else "(no scene)"
        return HTML(f'<prompt>catoptrica</prompt> {scene_status} > ')

    def _handle_command(self, input_string: str) -> None:
        """Parse and handle a command input"""
        try:
            input_list = shlex.split(input_string)
        except ValueError as e:
            logger.error(f"Error parsing command: {e}")
            return

        command_string = input_list[0].lower()

        try:
            command = self.commands.get(command_string)
            if command:
                command.handler([command.name] + input_list[1:])
            else:
                self._handle_unknown_command(command_string)
        except Exception as e:
            logger.error(f"Error executing command: {e}")

    def _handle_unknown_command(self, command: str) -> None:
        """Handle unknown command with suggestions"""
        logger.warning(f"Unknown command: '{command}'")

        suggestions = self._get_command_suggestions(command)
        if suggestions:
            logger.info("Did you mean one of these?")
            for suggestion in suggestions:
                logger.info(f"  - {suggestion}")
        logger.info("Use 'help' to see all available commands.")

    def _get_command_suggestions(self, command: str, max_suggestions: int = 3) -> List[str]:
        """Get command suggestions based on string similarity"""
        from difflib import get_close_matches
        return get_close_matches(command, self.commands.keys(), n=max_suggestions, cutoff=0.6)

    def _print_welcome_message(self, clearing: bool = False) -> None:
        """Print welcome message and initial status

        Args:
            clearing (bool): Whether this is being called during a screen clear
                        When True, skips the final horizontal bar to avoid doubles
        """
        print_h_bar()
        logger.info("👋 Welcome to the catoptrica CLI!")
        logger.info("Type 'help' for a list of commands.")
        if not clearing:
            print_h_bar()

    def _show_command_help(self, command_name: str) -> None:
        """Show help for a specific command"""
        command = self.commands.get(command_name)
        if not command:
            logger.warning(f"Unknown command: '{command_name}'")
            suggestions = self._get_command_suggestions(command_name)
            if suggestions:
                logger.info("Did you mean one of these?")
                for suggestion in suggestions:
                    logger.info(f"  - {suggestion}")
            return

        logger.info(f"\nHelp for '{command.name}':")
        logger.info(f"Description: {command.description}")

        if command.aliases:
            logger.info(f"Aliases: {', '.join(command.aliases)}")

        if command.tips:
            logger.info("\nTips:")
            for tip in command.tips:
                logger.info(f"  - {tip}")

    def _show_general_help(self) -> None:
        """Show general help information"""
        logger.info("\nAvailable Commands:")
        for cmd_name, cmd in sorted(self.commands.items()):
            # Only show main commands, not aliases
            if cmd_name == cmd.name:
                logger.info(f"  {cmd.name:<18} - {cmd.description}")

    def _load_scene_from_file(self, scene_name: str) -> None:
        try:
            self.scene = CatoptricaScene.from_file(scene_name, self.scenes_dir)
            self.scene_path = self.scenes_dir / f"{scene_name}.json"
            logger.info(f"\n✅ Successfully loaded scene: {self.scene.name} ({self.scene.profile!r})")
        except ConfigError as e:
            logger.error(f"Invalid scene file {scene_name}: {e}")
            logger.info("Use 'list-scenes' to see available scenes.")
        except Exception as e:
            logger.error(f"Error loading scene: {e}")

    def _load_default_scene(self) -> None:
        """Load the default scene named in scenes/general.json"""
        general_path = self.scenes_dir / "general.json"
        try:
            data = json.loads(general_path.read_text())
        except FileNotFoundError:
            logger.error("File general.json not found, please create one.")
            return
        except json.JSONDecodeError:
            logger.error("File scenes/general.json contains Invalid JSON format")
            return

        if not data.get('default_scene'):
            logger.error('No default scene defined, please set one in general.json')
            return
        self._load_scene_from_file(data['default_scene'])

    ###################
    # Command functions
    ###################
    def help(self, input_list: List[str]) -> None:
        """List all commands supported by the CLI"""
        if len(input_list) > 1:
            self._show_command_help(input_list[1])
        else:
            self._show_general_help()

    def clear_screen(self, input_list: List[str]) -> None:
        """Clear the terminal screen"""
        os.system('cls' if os.name == 'nt' else 'clear')
        self._print_welcome_message(clearing=True)

    def list_scenes(self, input_list: List[str]) -> None:
        """Handle list scenes command"""
        logger.info("\nAvailable Scenes:")
        if not self.scenes_dir.exists():
            logger.info("No scenes directory found.")
            return

        scene_files = sorted(f for f in self.scenes_dir.glob("*.json") if f.stem != "general")
        if not scene_files:
            logger.info("No scenes found. Add a JSON run configuration to the 'scenes' directory.")
            return

        for scene_file in scene_files:
            logger.info(f"- {scene_file.stem}")

    def load_scene(self, input_list: List[str]) -> None:
        """Handle load scene command"""
        if len(input_list) < 2:
            logger.info("Please specify a scene name.")
            logger.info("Format: load-scene {scene_name}")
            logger.info("Use 'list-scenes' to see available scenes.")
            return

        self._load_scene_from_file(input_list[1])

    def set_default_scene(self, input_list: List[str]) -> None:
        """Handle set default scene command"""
        if len(input_list) < 2:
            logger.info("Please specify the name of the scene file.")
            return

        scene_name = input_list[1]
        if not (self.scenes_dir / f"{scene_name}.json").exists():
            logger.error(f"Scene file not found: {scene_name}")
            return

        general_path = self.scenes_dir / "general.json"
        try:
            data = json.loads(general_path.read_text()) if general_path.exists() else {}
        except json.JSONDecodeError:
            logger.error("Invalid JSON format")
            return
        data["default_scene"] = scene_name
        general_path.write_text(json.dumps(data, indent=2) + "\n")
        logger.info(f"Scene {scene_name} is now set as default.")

    def scene_command(self, input_list: List[str]) -> None:
        """Run reflect, focal, wavefront or verify on the loaded scene"""
        if self.scene is None:
            logger.info("No scene is currently loaded. Use 'load-scene' to load a scene.")
            return

        try:
            args = self.parser.parse_args(input_list + ["--config", str(self.scene_path)])
        except SystemExit:
            return

        status = _run_args(args, self.scene.name)
        if status == 0:
            logger.info(f"\n✅ {args.command} finished")
        else:
            logger.info(f"\n❌ {args.command} exited with status {status}")

    def exit(self, input_list: List[str]) -> None:
        """Exit the CLI gracefully"""
        logger.info("\nGoodbye! 👋")
        sys.exit(0)

    ###################
    # Main CLI Loop
    ###################
    def main_loop(self) -> None:
        """Main CLI loop"""
        self._print_welcome_message()
        self._load_default_scene()
        if self.scene is None:
            logger.info("\nNo default scene is loaded, please use the load-scene command to do that.")

        # Start CLI loop
        while True:
            try:
                input_string = self.session.prompt(
                    self._get_prompt_message(),
                    style=self.style
                ).strip()

                if not input_string:
                    continue

                self._handle_command(input_string)
                print_h_bar()

            except KeyboardInterrupt:
                continue
            except EOFError:
                self.exit([])
            except Exception as e:
                logger.exception(f"Unexpected error: {e}")
