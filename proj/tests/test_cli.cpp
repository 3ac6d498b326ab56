int sqg_placeholder_cli;
