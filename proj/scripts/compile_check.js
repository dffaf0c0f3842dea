// Compiles every .sol file in a directory with solc 0.5.16 and prints errors.
//
//   npm install solc@0.5.16
//   NODE_PATH=$(npm root) node scripts/compile_check.js <dir>
'use strict';

const fs = require('fs');
const path = require('path');
const solc = require('solc');

const dir = process.argv[2];
const sources = {};
for (const f of fs.readdirSync(dir).filter((f) => f.endsWith('.sol')).sort())
  sources[f] = { content: fs.readFileSync(path.join(dir, f), 'utf8') };

const input = { language: 'Solidity', sources, settings: { outputSelection: { '*': { '*': [] } } } };
const output = JSON.parse(solc.compile(JSON.stringify(input)));
let errors = 0;
for (const e of output.errors || []) {
  if (e.severity === 'error') errors++;
  console.log(e.formattedMessage.trim());
}
console.log(`${Object.keys(sources).length} files, ${errors} errors`);
process.exit(errors ? 1 : 0);
